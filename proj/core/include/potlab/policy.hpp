#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "potlab/distribution.hpp"

namespace potlab {

// Optimal-policy thresholds tau_j = G_j/j with the value recursion
// G_{j+1} = E[X] + E[max(G_j, jX)]; commit with j periods remaining iff the
// observed value is at least tau_j.
struct PolicyThresholds {
    int n = 0;
    std::vector<double> tau;  // tau[0..n], tau[0] = 0
    std::vector<double> g;    // g[0..n]
};

// Quantile policy with k blocks: block s (1-based, stored at index s-1) covers
// remaining times N_{s-1} < r <= N_s and commits on the top-q_s quantile mass.
// Chronologically block k runs first. Quantiles decrease in s: q_k < ... < q_1.
struct ThresholdSchedule {
    int n = 0;
    std::vector<int> lengths;        // n_1..n_k
    std::vector<double> quantiles;   // q_1..q_k
    std::vector<long long> cum;      // N_1..N_k

    static ThresholdSchedule make(int n, std::vector<int> lengths,
                                  std::vector<double> quantiles);
    int k() const { return static_cast<int>(lengths.size()); }
    // 0-based block index for remaining time r in [1, n]
    int interval_of(int remaining) const;
    // threshold z_s = F^{-1}(1 - q_s)
    double threshold(const Distribution& dist, int s) const;
};

struct SimulationReport {
    double value = 0.0;
    double benchmark = 0.0;
    double ratio = 0.0;
    double half_width = 0.0;  // 95% normal CI
    long long trials = 0;
    std::uint64_t seed = 0;
};

// E_n(F) = int_0^inf (n - sum_{l<=n} F^l) dx; closed form over constancy
// intervals for atomic F, piecewise adaptive quadrature otherwise.
double benchmark_exact(const Distribution& dist, int n, double abs_tol = 1e-10);

PolicyThresholds optimal_thresholds(const Distribution& dist, int n);

// Exact expected value of the quantile policy:
// sum_s prod_{t>s}(1-q_t)^{n_t} (A_{N_s,n_s}(q_s) I(q_s) + B_{n_s}(q_s)(E[X]-I(q_s)))
// with I(q) the top-quantile integral.
double kthreshold_value_exact(const Distribution& dist,
                              const ThresholdSchedule& sched);

// Decision interface: remaining periods, observed value, and the underlying
// uniform draw (quantile policies decide on u, threshold policies on value).
using PolicyFn = std::function<bool(int remaining, double value, double u)>;

SimulationReport simulate_policy(const Distribution& dist, int n,
                                 const PolicyFn& decide, long long trials,
                                 std::uint64_t seed);
SimulationReport simulate_policy(const Distribution& dist, int n,
                                 const PolicyThresholds& pol, long long trials,
                                 std::uint64_t seed);
SimulationReport simulate_policy(const Distribution& dist, int n,
                                 const ThresholdSchedule& sched, long long trials,
                                 std::uint64_t seed);

}  // namespace potlab
