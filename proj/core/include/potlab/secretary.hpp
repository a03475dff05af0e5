#pragma once

#include <cstdint>
#include <vector>

#include "potlab/policy.hpp"

namespace potlab {

// Random-order instance with values u_1 > u_2 > ... > u_n >= 0. Rank-only
// instances compare by rank (value magnitudes never enter decisions); their
// stored sub-maximum values may underflow to equal tiny doubles.
struct SecretaryInstance {
    std::vector<double> values;  // values[i] = u_{i+1}
    bool rank_only = false;

    static SecretaryInstance from_values(std::vector<double> values);
    // u_1 = 1 and geometrically negligible lower values eps^i, isolating the
    // max-capture term in simulated ratios.
    static SecretaryInstance rank_instance(int n, double eps = 1e-9);

    int n() const { return static_cast<int>(values.size()); }
    double opt() const { return static_cast<double>(values.size()) * values[0]; }
};

// Sample the first floor(theta n) values, then commit forever on the first
// value at least the recorded sample max; every non-commit period banks its
// observed value once.
SimulationReport simulate_stsf(const SecretaryInstance& inst, double theta,
                               long long trials, std::uint64_t seed);

// theta (theta - 1 - ln theta), the asymptotic guarantee.
double analytic_bound(double theta);

struct ThetaStar {
    double theta = 0.0;
    double value = 0.0;
};
// theta* = -(1/2) W0(-2/e^2).
ThetaStar theta_star();

// Principal Lambert branch via Halley iteration; requires z >= -1/e.
double lambert_w0(double z);

struct DpBound {
    double v1 = 0.0;        // v_1(1)
    double ratio = 0.0;     // v_1(1)/n
    long long tau_star = 0; // last t where waiting beats stopping
};
// Ordinal dynamic program with reward (t/n)(n-t+1) for stopping on a record.
DpBound dp_upper_bound(int n);

struct AdversarialDemo {
    double alg_best_log10 = 0.0;  // log10 of (c+n) c^{n-2}
    double opt_log10 = 0.0;       // log10 of n c^{n-1}
    double ratio_bound = 0.0;     // (c+n)/(n c), = 2/n at c = n
};
// Worst-case-order impossibility for u_i = c^{n-i}; c defaults to n.
AdversarialDemo adversarial_demo(int n, double c = -1.0);

}  // namespace potlab
