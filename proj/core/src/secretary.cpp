#include "potlab/secretary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "potlab/rng.hpp"

namespace potlab {

SecretaryInstance SecretaryInstance::from_values(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("secretary: empty instance");
    for (size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0))
            throw std::invalid_argument("secretary: values must be non-negative");
        if (i > 0 && !(values[i] < values[i - 1]))
            throw std::invalid_argument("secretary: values must be strictly decreasing");
    }
    SecretaryInstance inst;
    inst.values = std::move(values);
    return inst;
}

SecretaryInstance SecretaryInstance::rank_instance(int n, double eps) {
    if (n < 1) throw std::invalid_argument("secretary: n must be >= 1");
    SecretaryInstance inst;
    inst.rank_only = true;
    inst.values.resize(static_cast<size_t>(n));
    inst.values[0] = 1.0;
    double v = 1.0;
    for (int i = 1; i < n; ++i) {
        v *= eps;  // underflows to 0 for large i; ranks still decide
        inst.values[static_cast<size_t>(i)] = v;
    }
    return inst;
}

SimulationReport simulate_stsf(const SecretaryInstance& inst, double theta,
                               long long trials, std::uint64_t seed) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("simulate_stsf: theta must lie in [0,1]");
    if (trials < 1) throw std::invalid_argument("simulate_stsf: trials must be >= 1");
    const int n = inst.n();
    const int tau = static_cast<int>(std::floor(theta * n));
    const double opt = inst.opt();

    constexpr long long kChunk = 256;
    const long long n_chunks = (trials + kChunk - 1) / kChunk;
    std::vector<double> sum(n_chunks, 0.0), sumsq(n_chunks, 0.0);
    parallel_chunks(trials, kChunk, [&](long long c, long long b, long long e) {
        // per-thread order buffer, restored after each trial via the swap log
        std::vector<int> order(static_cast<size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::vector<std::pair<int, int>> swaps;
        swaps.reserve(static_cast<size_t>(n));
        double s = 0.0, s2 = 0.0;
        for (long long t = b; t < e; ++t) {
            Rng rng = make_stream(seed, static_cast<std::uint64_t>(t));
            swaps.clear();
            double reward = 0.0;
            int best_rank = n;  // rank index of sample max; n = none yet
            for (int pos = 0; pos < n; ++pos) {
                int j = pos + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - pos)));
                if (j != pos) {
                    std::swap(order[static_cast<size_t>(pos)], order[static_cast<size_t>(j)]);
                    swaps.emplace_back(pos, j);
                }
                int rank = order[static_cast<size_t>(pos)];
                double v = inst.values[static_cast<size_t>(rank)];
                if (pos < tau) {
                    reward += v;  // sampling phase banks one unit
                    best_rank = std::min(best_rank, rank);
                } else if (rank < best_rank) {  // v >= sample max (u* = 0 if none)
                    reward += static_cast<double>(n - pos) * v;  // n - t + 1 periods
                    break;
                } else {
                    reward += v;
                }
            }
            for (auto it = swaps.rbegin(); it != swaps.rend(); ++it)
                std::swap(order[static_cast<size_t>(it->first)],
                          order[static_cast<size_t>(it->second)]);
            double r = reward / opt;
            s += r;
            s2 += r * r;
        }
        sum[c] = s;
        sumsq[c] = s2;
    });
    double s = 0.0, s2 = 0.0;
    for (long long c = 0; c < n_chunks; ++c) {
        s += sum[c];
        s2 += sumsq[c];
    }
    SimulationReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.benchmark = opt;
    rep.ratio = s / trials;
    rep.value = rep.ratio * opt;
    double var = trials > 1 ? (s2 - trials * rep.ratio * rep.ratio) / (trials - 1) : 0.0;
    if (var < 0.0) var = 0.0;
    rep.half_width = 1.959963984540054 * std::sqrt(var / trials);
    return rep;
}

double analytic_bound(double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("analytic_bound: theta must lie in (0,1]");
    return theta * (theta - 1.0 - std::log(theta));
}

double lambert_w0(double z) {
    constexpr double kInvE = 0.36787944117144233;
    if (!(z >= -kInvE)) throw std::invalid_argument("lambert_w0: z must be >= -1/e");
    double w;
    if (z < -0.25) {
        // near the branch point: w = -1 + p - p^2/3 + 11 p^3/72, p = sqrt(2(ez+1))
        double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    } else if (z < std::exp(1.0)) {
        w = z < 0.0 ? z : std::log1p(z);
    } else {
        double l = std::log(z);
        w = l - std::log(l);
    }
    for (int i = 0; i < 100; ++i) {
        double ew = std::exp(w);
        double f = w * ew - z;
        double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        double dw = f / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) break;
    }
    if (std::abs(w * std::exp(w) - z) > 1e-12 * std::max(1.0, std::abs(z)))
        throw std::runtime_error("lambert_w0: residual check failed");
    return w;
}

ThetaStar theta_star() {
    ThetaStar ts;
    ts.theta = -0.5 * lambert_w0(-2.0 / std::exp(2.0));
    ts.value = analytic_bound(ts.theta);
    return ts;
}

DpBound dp_upper_bound(int n) {
    if (n < 1) throw std::invalid_argument("dp_upper_bound: n must be >= 1");
    double v1 = 0.0, v0 = 0.0;
    long long tau = 0;
    for (int t = n; t >= 1; --t) {
        double cont = (1.0 / (t + 1.0)) * v1 + (static_cast<double>(t) / (t + 1.0)) * v0;
        double stop = (static_cast<double>(t) / n) * (n - t + 1.0);
        if (cont > stop && tau == 0) tau = t;  // last t where waiting wins
        v1 = std::max(stop, cont);
        v0 = cont;
    }
    DpBound b;
    b.v1 = v1;
    b.ratio = v1 / n;
    b.tau_star = tau;
    return b;
}

AdversarialDemo adversarial_demo(int n, double c) {
    if (n < 2 || n > 20)
        throw std::invalid_argument("adversarial_demo: n must lie in [2, 20]");
    if (c <= 0.0) c = static_cast<double>(n);
    AdversarialDemo d;
    const double lc = std::log10(c);
    d.opt_log10 = std::log10(static_cast<double>(n)) + (n - 1.0) * lc;
    d.alg_best_log10 = std::log10(c + n) + (n - 2.0) * lc;
    d.ratio_bound = (c + n) / (n * c);
    return d;
}

}  // namespace potlab
