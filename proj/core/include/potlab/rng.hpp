#pragma once

#include <cstdint>
#include <functional>

namespace potlab {

// Counter-based splitmix64 stream. Each (seed, stream) pair yields an
// independent deterministic sequence, so Monte-Carlo results do not depend
// on how trials are scheduled across workers.
struct Rng {
    std::uint64_t state;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, bound); bound >= 1
    std::uint64_t below(std::uint64_t bound) {
        // 128-bit multiply rejection-free scaling (bias < 2^-64, irrelevant here)
        return static_cast<std::uint64_t>(
            (static_cast<__uint128_t>(next()) * bound) >> 64);
    }
};

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng{mix64(seed + 0x9E3779B97F4A7C15ULL) ^
               mix64((stream + 1) * 0xD2B74407B1CE6E93ULL)};
}

// Worker count: POTLAB_THREADS caps it, hardware concurrency otherwise.
int worker_count();

// Runs fn(chunk_index, begin, end) over [0, total) split into fixed chunks of
// size chunk. Chunk boundaries depend only on (total, chunk), never on the
// worker count, so per-chunk results can be reduced in index order for
// scheduling-independent output.
void parallel_chunks(long long total, long long chunk,
                     const std::function<void(long long, long long, long long)>& fn);

}  // namespace potlab
