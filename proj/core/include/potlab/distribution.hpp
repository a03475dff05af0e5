#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "potlab/rng.hpp"

namespace potlab {

enum class DistKind { atomic, uniform, exponential, mixture };

struct HardInstanceParams {
    int n = 2;
    double beta = 1.0;  // in [1, n], and 1/n^3 + beta/n <= 1
};

// Immutable distribution over the non-negative reals: finite atomic
// (piecewise-constant CDF), uniform, exponential, or an exponential(1)
// mixture used as a smoother. Values are safe to share across threads;
// sampling takes a caller-owned rng state.
class Distribution {
  public:
    static Distribution atomic(std::vector<std::pair<double, double>> atoms);
    static Distribution uniform(double lo, double hi);
    static Distribution exponential(double rate);
    // Fhat(x) = (1/(1+eps/n^3)) F(x) + ((eps/n^3)/(1+eps/n^3)) (1-e^{-x})
    static Distribution mixture(Distribution base, double epsilon, int n);
    static Distribution hard_instance(const HardInstanceParams& p);

    DistKind kind() const { return kind_; }

    double cdf(double x) const;
    // Left-continuous generalized inverse inf{x : F(x) >= p}. At atoms,
    // P(X >= quantile(1-q)) may exceed q, so exact policy-value formulas work
    // in quantile space (drawing u and committing on u) rather than on the
    // mapped value; see simulate_policy.
    double quantile(double p) const;
    double mean() const { return mean_; }
    double sample(Rng& rng) const { return quantile(rng.uniform01()); }

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }  // +inf allowed

    // E[(X - c)+] = int_c^inf (1 - F), exact per family.
    double partial_expectation(double c) const;
    // int_a^b F(x) dx for 0 <= a <= b, via partial expectations.
    double integrate_cdf(double a, double b) const;
    // int_0^q F^{-1}(1-u) du, the expected value carried by the top-q
    // quantile mass. Exact for atomic; z*q + E[(X-z)+] with z = F^{-1}(1-q)
    // for continuous kinds.
    double top_quantile_integral(double q) const;

    // x-values where the CDF jumps or changes analytic form (atoms,
    // uniform endpoints); quadratures split on these.
    std::vector<double> breakpoints() const;

    // Atomic accessors (throw for other kinds).
    const std::vector<double>& atom_values() const;
    const std::vector<double>& atom_masses() const;

    // Mixture accessors.
    const Distribution& mixture_base() const;
    double mixture_epsilon() const { return mix_eps_; }
    int mixture_n() const { return mix_n_; }
    double mixture_weight() const { return weight_; }  // weight on exponential(1)

    double uniform_lo() const { return a_; }
    double uniform_hi() const { return b_; }
    double exponential_rate() const { return a_; }

  private:
    Distribution() = default;

    DistKind kind_ = DistKind::atomic;
    // atomic
    std::vector<double> values_, masses_, cum_;
    std::vector<double> suffix_mass_, suffix_vm_;  // tails over [i, end)
    // uniform: a_=lo, b_=hi ; exponential: a_=rate
    double a_ = 0.0, b_ = 0.0;
    // mixture
    std::shared_ptr<const Distribution> base_;
    double mix_eps_ = 0.0, weight_ = 0.0;
    int mix_n_ = 0;

    double lo_ = 0.0, hi_ = 0.0, mean_ = 0.0;
};

Distribution smooth(const Distribution& dist, double epsilon, int n);

}  // namespace potlab
