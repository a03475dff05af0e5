#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "potlab/policy.hpp"

using namespace potlab;

namespace {

Distribution two_point() {
    return Distribution::atomic({{0.0, 0.5}, {1.0, 0.5}});
}

// independent finite-sum kernels for oracle values
double a_direct(long long l, long long lp, double q) {
    double s = 0.0, w = 1.0;
    for (long long t = 0; t < lp; ++t) {
        s += (l - t) * w;
        w *= 1.0 - q;
    }
    return s;
}

double b_direct(long long l, double q) {
    double s = 0.0, w = 1.0;
    for (long long t = 0; t < l; ++t) {
        s += w;
        w *= 1.0 - q;
    }
    return s;
}

Distribution random_atomic(Rng& rng, int max_atoms = 6) {
    int k = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_atoms - 1)));
    std::vector<std::pair<double, double>> atoms;
    double rest = 1.0;
    for (int i = 0; i < k; ++i) {
        double mass = i + 1 == k ? rest : rest * (0.15 + 0.5 * rng.uniform01());
        if (i + 1 < k) rest -= mass;
        atoms.push_back({0.05 + 4.0 * rng.uniform01(), mass});
    }
    return Distribution::atomic(atoms);
}

}  // namespace

TEST_CASE("benchmark_exact: enumeration oracle and closed forms") {
    // E_2 oracle for the two-point coin: E max(X1) + E max(X1, X2)
    double oracle = 0.5 + (1.0 - 0.25);
    CHECK(benchmark_exact(two_point(), 2) == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(benchmark_exact(two_point(), 1) == doctest::Approx(0.5).epsilon(1e-15));

    auto u = Distribution::uniform(0.0, 1.0);
    // sum_{l<=3} l/(l+1)
    double e3 = 0.5 + 2.0 / 3.0 + 0.75;
    CHECK(benchmark_exact(u, 3) == doctest::Approx(e3).epsilon(1e-10));

    // quadrature path must agree with the atomic closed form on a smoothed atom set
    auto s = smooth(two_point(), 0.2, 4);
    double quad = benchmark_exact(s, 6);
    // oracle: mixture CDF is explicit, integrate P_6(Fhat) with fine trapezoid
    auto f = [&](double x) {
        double c = s.cdf(x);
        double p = 0.0, t = 1.0;
        for (int l = 1; l <= 6; ++l) { t *= c; p += 1.0 - t; }
        return p;
    };
    // midpoint-rule oracle split at the CDF jumps (midpoints never hit them)
    double acc = 0.0;
    for (auto [lo, hi] : {std::pair{0.0, 1.0}, std::pair{1.0, 60.0}}) {
        int steps = 2000000;
        double h = (hi - lo) / steps;
        for (int i = 0; i < steps; ++i) acc += h * f(lo + (i + 0.5) * h);
    }
    CHECK(quad == doctest::Approx(acc).epsilon(1e-8));

    // hard instance at large beta: benchmark approaches 1
    auto hard = Distribution::hard_instance({2000, 200.0});
    double e = benchmark_exact(hard, 2000);
    CHECK(e > 0.98);
    CHECK(e < 1.02);
}

TEST_CASE("optimal_thresholds: hand recursion and point mass") {
    auto p = optimal_thresholds(two_point(), 2);
    CHECK(p.g[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.g[2] == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(p.tau[0] == 0.0);
    CHECK(p.tau[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.tau[2] == doctest::Approx(0.625).epsilon(1e-15));

    auto pm = Distribution::atomic({{1.0, 1.0}});
    auto q = optimal_thresholds(pm, 7);
    for (int j = 1; j <= 7; ++j) CHECK(q.g[static_cast<size_t>(j)] == doctest::Approx(j).epsilon(1e-14));

    Rng rng = make_stream(5, 0);
    for (int rep = 0; rep < 5; ++rep) {
        auto d = random_atomic(rng);
        CHECK(optimal_thresholds(d, 3).tau[1] == doctest::Approx(d.mean()).epsilon(1e-13));
    }
}

TEST_CASE("kthreshold_value_exact: degenerate quantiles and oracle") {
    auto d = two_point();
    auto hi = ThresholdSchedule::make(3, {3}, {1.0 - 1e-9});
    CHECK(kthreshold_value_exact(d, hi) == doctest::Approx(1.5).epsilon(1e-6));
    auto lo = ThresholdSchedule::make(3, {3}, {1e-12});
    CHECK(kthreshold_value_exact(d, lo) == doctest::Approx(1.5).epsilon(1e-6));

    // oracle from the finite-sum kernels and exact quantile integrals
    auto s5 = ThresholdSchedule::make(5, {5}, {1.0 / 3.0});
    double iq = 1.0 / 3.0;  // top third of quantile mass all sits on the atom at 1
    double oracle = a_direct(5, 5, 1.0 / 3.0) * iq + b_direct(5, 1.0 / 3.0) * (0.5 - iq);
    CHECK(kthreshold_value_exact(d, s5) == doctest::Approx(oracle).epsilon(1e-12));

    // z_s is the generalized-inverse threshold for block s
    CHECK(s5.threshold(d, 0) == 1.0);

    auto bad = ThresholdSchedule::make(4, {2, 2}, {0.5, 0.25});
    CHECK_THROWS_AS((void)simulate_policy(d, 5, bad, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdSchedule::make(4, {2, 2}, {0.25, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(ThresholdSchedule::make(4, {2, 3}, {0.5, 0.25}), std::invalid_argument);
}

TEST_CASE("simulate_policy: exact point mass, CI agreement with exact values") {
    auto pm = Distribution::atomic({{1.0, 1.0}});
    PolicyFn never = [](int, double, double) { return false; };
    auto rep = simulate_policy(pm, 4, never, 2000, 7);
    CHECK(rep.value == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(rep.half_width == doctest::Approx(0.0));

    auto d = two_point();
    auto pol = optimal_thresholds(d, 2);
    auto r2 = simulate_policy(d, 2, pol, 1000000, 42);
    CHECK(std::abs(r2.value - 1.25) <= 3.0 * r2.half_width);
    CHECK(r2.benchmark == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(r2.ratio == doctest::Approx(r2.value / r2.benchmark));

    auto r3 = simulate_policy(d, 3, never, 400000, 43);
    CHECK(std::abs(r3.value - 3.0 * d.mean()) <= 3.0 * r3.half_width);

    // quantile-space schedule simulation matches the exact formula on atoms
    auto s5 = ThresholdSchedule::make(5, {5}, {1.0 / 3.0});
    double exact = kthreshold_value_exact(d, s5);
    auto r4 = simulate_policy(d, 5, s5, 1000000, 44);
    CHECK(std::abs(r4.value - exact) <= 3.0 * r4.half_width);
}

TEST_CASE("property: DP dominates schedules; prophet dominates DP") {
    Rng rng = make_stream(21, 9);
    for (int rep = 0; rep < 6; ++rep) {
        auto d = random_atomic(rng);
        int n = 5 + static_cast<int>(rng.below(46));
        auto pol = optimal_thresholds(d, n);
        CHECK(benchmark_exact(d, n) >= pol.g[static_cast<size_t>(n)] - 1e-9);

        // random schedule
        int k = 1 + static_cast<int>(rng.below(3));
        std::vector<int> lens(static_cast<size_t>(k), 1);
        int rest = n - k;
        for (int i = 0; i < k - 1; ++i) {
            int add = static_cast<int>(rng.below(static_cast<std::uint64_t>(rest + 1)));
            lens[static_cast<size_t>(i)] += add;
            rest -= add;
        }
        lens[static_cast<size_t>(k - 1)] += rest;
        std::vector<double> qs(static_cast<size_t>(k));
        double q = 0.1 + 0.8 * rng.uniform01();
        for (int i = 0; i < k; ++i) {
            qs[static_cast<size_t>(i)] = q;
            q *= 0.25 + 0.5 * rng.uniform01();
        }
        auto sched = ThresholdSchedule::make(n, lens, qs);
        CHECK(kthreshold_value_exact(d, sched) <= pol.g[static_cast<size_t>(n)] + 1e-9);

        auto r_dp = simulate_policy(d, n, pol, 200000, 1000 + rep);
        auto r_sc = simulate_policy(d, n, sched, 200000, 1000 + rep);
        CHECK(r_dp.value >= r_sc.value - 3.0 * (r_dp.half_width + r_sc.half_width));
    }
}

TEST_CASE("determinism: identical reports regardless of worker count") {
    auto d = two_point();
    auto pol = optimal_thresholds(d, 6);
    setenv("POTLAB_THREADS", "1", 1);
    auto r1 = simulate_policy(d, 6, pol, 50000, 77);
    setenv("POTLAB_THREADS", "4", 1);
    auto r4 = simulate_policy(d, 6, pol, 50000, 77);
    unsetenv("POTLAB_THREADS");
    CHECK(r1.value == r4.value);
    CHECK(r1.half_width == r4.half_width);
    CHECK(r1.ratio == r4.ratio);
}
