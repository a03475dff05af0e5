#include "potlab/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "potlab/kernels.hpp"
#include "potlab/numerics.hpp"

namespace potlab {

ThresholdSchedule ThresholdSchedule::make(int n, std::vector<int> lengths,
                                          std::vector<double> quantiles) {
    if (lengths.empty() || lengths.size() != quantiles.size())
        throw std::invalid_argument("schedule: lengths/quantiles size mismatch");
    long long total = 0;
    for (int l : lengths) {
        if (l < 1) throw std::invalid_argument("schedule: lengths must be >= 1");
        total += l;
    }
    if (total != n) throw std::invalid_argument("schedule: lengths must sum to n");
    for (size_t s = 0; s < quantiles.size(); ++s) {
        if (!(quantiles[s] > 0.0 && quantiles[s] < 1.0))
            throw std::invalid_argument("schedule: quantiles must lie in (0,1)");
        if (s > 0 && !(quantiles[s] < quantiles[s - 1]))
            throw std::invalid_argument("schedule: quantiles must be strictly decreasing");
    }
    ThresholdSchedule sc;
    sc.n = n;
    sc.lengths = std::move(lengths);
    sc.quantiles = std::move(quantiles);
    sc.cum.resize(sc.lengths.size());
    long long c = 0;
    for (size_t s = 0; s < sc.lengths.size(); ++s) {
        c += sc.lengths[s];
        sc.cum[s] = c;
    }
    return sc;
}

int ThresholdSchedule::interval_of(int remaining) const {
    auto it = std::lower_bound(cum.begin(), cum.end(),
                               static_cast<long long>(remaining));
    return static_cast<int>(it - cum.begin());
}

double ThresholdSchedule::threshold(const Distribution& dist, int s) const {
    return dist.quantile(1.0 - quantiles[static_cast<size_t>(s)]);
}

double benchmark_exact(const Distribution& dist, int n, double abs_tol) {
    if (n < 1) throw std::invalid_argument("benchmark_exact: n must be >= 1");
    if (n == 1) return dist.mean();
    if (dist.kind() == DistKind::atomic) {
        const auto& v = dist.atom_values();
        const auto& m = dist.atom_masses();
        double e = v.front() > 0.0 ? v.front() * n : 0.0;
        double c = 0.0;
        for (size_t i = 0; i + 1 < v.size(); ++i) {
            c += m[i];
            e += (v[i + 1] - v[i]) * P_poly(n, std::min(c, 1.0));
        }
        return e;
    }
    // Piecewise quadrature between CDF breakpoints; the integrand past
    // quantile(1-cut) is below n^2*cut, negligible at this cut.
    double cut = std::min(1e-12, abs_tol / (20.0 * n * static_cast<double>(n)));
    cut = std::max(cut, 1e-15);
    double x_hi = dist.quantile(1.0 - cut);
    if (!std::isfinite(x_hi)) x_hi = dist.support_hi();
    std::vector<double> pts{0.0, x_hi};
    for (double b : dist.breakpoints())
        if (b > 0.0 && b < x_hi) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    auto f = [&](double x) { return P_poly(n, dist.cdf(x)); };
    double e = 0.0;
    double seg_tol = abs_tol / static_cast<double>(pts.size());
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        e += integrate_simpson(f, pts[i], pts[i + 1], seg_tol);
    return e;
}

PolicyThresholds optimal_thresholds(const Distribution& dist, int n) {
    if (n < 1) throw std::invalid_argument("optimal_thresholds: n must be >= 1");
    PolicyThresholds p;
    p.n = n;
    p.g.resize(n + 1);
    p.tau.resize(n + 1);
    p.g[0] = 0.0;
    p.tau[0] = 0.0;
    const double mu = dist.mean();
    p.g[1] = mu;
    p.tau[1] = mu;
    for (int j = 1; j < n; ++j) {
        // E[max(G_j, jX)] = G_j + j * E[(X - G_j/j)+]
        p.g[j + 1] = mu + p.g[j] + j * dist.partial_expectation(p.tau[j]);
        p.tau[j + 1] = p.g[j + 1] / (j + 1);
    }
    return p;
}

double kthreshold_value_exact(const Distribution& dist,
                              const ThresholdSchedule& sched) {
    const double mu = dist.mean();
    const int k = sched.k();
    double value = 0.0;
    double w = 1.0;  // prod_{t>s} (1-q_t)^{n_t}, built from s = k downward
    for (int s = k - 1; s >= 0; --s) {
        const double q = sched.quantiles[static_cast<size_t>(s)];
        const long long ns = sched.lengths[static_cast<size_t>(s)];
        const long long Ns = sched.cum[static_cast<size_t>(s)];
        const double iq = dist.top_quantile_integral(q);
        value += w * (A_coeff(Ns, ns, q) * iq + B_coeff(ns, q) * (mu - iq));
        w *= std::exp(ns * std::log1p(-q));
    }
    return value;
}

SimulationReport simulate_policy(const Distribution& dist, int n,
                                 const PolicyFn& decide, long long trials,
                                 std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_policy: trials must be >= 1");
    constexpr long long kChunk = 4096;  // fixed grid, independent of workers
    const long long n_chunks = (trials + kChunk - 1) / kChunk;
    std::vector<double> sum(n_chunks, 0.0), sumsq(n_chunks, 0.0);
    parallel_chunks(trials, kChunk, [&](long long c, long long b, long long e) {
        double s = 0.0, s2 = 0.0;
        for (long long t = b; t < e; ++t) {
            Rng rng = make_stream(seed, static_cast<std::uint64_t>(t));
            double reward = 0.0;
            for (int r = n; r >= 1; --r) {
                double u = rng.uniform01();
                double x = dist.quantile(u);
                if (decide(r, x, u)) {
                    reward += r * x;
                    break;
                }
                reward += x;
            }
            s += reward;
            s2 += reward * reward;
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
    rep.value = s / trials;
    double var = trials > 1 ? (s2 - trials * rep.value * rep.value) / (trials - 1) : 0.0;
    if (var < 0.0) var = 0.0;
    rep.half_width = 1.959963984540054 * std::sqrt(var / trials);
    rep.benchmark = benchmark_exact(dist, n);
    rep.ratio = rep.benchmark > 0.0 ? rep.value / rep.benchmark : 0.0;
    return rep;
}

SimulationReport simulate_policy(const Distribution& dist, int n,
                                 const PolicyThresholds& pol, long long trials,
                                 std::uint64_t seed) {
    if (pol.n != n) throw std::invalid_argument("simulate_policy: thresholds/n mismatch");
    PolicyFn decide = [&pol](int r, double value, double) {
        return value >= pol.tau[static_cast<size_t>(r)];
    };
    return simulate_policy(dist, n, decide, trials, seed);
}

SimulationReport simulate_policy(const Distribution& dist, int n,
                                 const ThresholdSchedule& sched, long long trials,
                                 std::uint64_t seed) {
    if (sched.n != n) throw std::invalid_argument("simulate_policy: schedule/n mismatch");
    PolicyFn decide = [&sched](int r, double, double u) {
        int s = sched.interval_of(r);
        return u > 1.0 - sched.quantiles[static_cast<size_t>(s)];
    };
    return simulate_policy(dist, n, decide, trials, seed);
}

}  // namespace potlab
