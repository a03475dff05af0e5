#pragma once

#include <cstdint>
#include <vector>

#include "potlab/kernels.hpp"
#include "potlab/policy.hpp"

namespace potlab {

struct BoundEvaluation {
    double value = 0.0;     // guaranteed ratio lower bound
    double argmin_v = 0.0;  // minimizing v (or lambda) of the inner inf
    std::vector<double> params;  // echo: n or 0 for asymptotic, then the
                                 // quantile/split parameters
};

// inf over v in [0,1] of sum_s prod_{t>s}(1-q_t)^{n_t} min{v,q_s}/g_n(v)
// * A_{N_s,n_s}(q_s); exact piecewise minimization with a scan+golden pass on
// mixed segments.
BoundEvaluation key_lower_bound(int n, const ThresholdSchedule& sched);

// (1 - a^2/(n+1-a)) min{2,a} (e^{-a}+a-1)/a^2 for the quantile a/(n+1);
// requires n >= a^2 + a - 1.
double single_threshold_bound(int n, double alpha);
// n -> infinity limit: min{2,a} Abar_{1,1}(a).
double single_threshold_bound_asymptotic(double alpha);

// Three-branch asymptotic lower bounds for two thresholds and for k
// equidistant blocks (alphas strictly decreasing).
BoundEvaluation two_threshold_asymptotic(double alpha1, double alpha2,
                                         double theta);
BoundEvaluation equidistant_asymptotic(const std::vector<double>& alphas);

enum class BoundKind { single_n, single_asymptotic, two_asymptotic, equidistant };

struct OptimizeSpec {
    BoundKind kind = BoundKind::single_asymptotic;
    int n = 0;  // for single_n
    int k = 3;  // for equidistant
};

// Multi-start coordinate search with shrinking steps; deterministic for a
// given seed, restarts reduce by max in index order.
BoundEvaluation optimize_bound(const OptimizeSpec& spec, int restarts,
                               std::uint64_t seed);

struct HardInstanceLimits {
    double e_limit = 0.0;   // lim_n E_n
    double alg_upper = 0.0; // upper bound on lim_n G_{n,1}
};

HardInstanceLimits hard_instance_limits(double beta);

}  // namespace potlab
