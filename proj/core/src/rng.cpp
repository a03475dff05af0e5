#include "potlab/rng.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace potlab {

int worker_count() {
    if (const char* env = std::getenv("POTLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(long long total, long long chunk,
                     const std::function<void(long long, long long, long long)>& fn) {
    if (total <= 0) return;
    if (chunk < 1) chunk = 1;
    const long long n_chunks = (total + chunk - 1) / chunk;
    int workers = worker_count();
    if (workers > n_chunks) workers = static_cast<int>(n_chunks);
    if (workers <= 1) {
        for (long long c = 0; c < n_chunks; ++c)
            fn(c, c * chunk, std::min(total, (c + 1) * chunk));
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                long long c = next.fetch_add(1);
                if (c >= n_chunks) return;
                fn(c, c * chunk, std::min(total, (c + 1) * chunk));
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace potlab
