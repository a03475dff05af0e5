#include "potlab/optimal_ratio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "potlab/numerics.hpp"
#include "potlab/policy.hpp"

namespace potlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double a_j(std::span<const double> y, int j) {
    if (j < 1 || static_cast<size_t>(j + 1) > y.size())
        throw std::invalid_argument("a_j: index out of range");
    double s = 0.0;
    for (int l = 1; l <= j; ++l) s += y[static_cast<size_t>(l - 1)];
    return (j + 2.0) / (j + 1.0) * y[static_cast<size_t>(j)] - s / (j * (j + 1.0));
}

bool in_Kn(std::span<const double> y, double tol) {
    double run = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] < -tol) return false;
        if (i >= 1) {
            run += y[i - 1];
            double j = static_cast<double>(i);
            double aj = (j + 2.0) / (j + 1.0) * y[i] - run / (j * (j + 1.0));
            if (aj < -tol) return false;
        }
    }
    return true;
}

double upsilon_value(int n, double eps, std::span<const double> y) {
    if (y.size() != static_cast<size_t>(n - 1))
        throw std::invalid_argument("upsilon_value: y must have length n-1");
    double s_all = 0.0, s_first = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        s_all += y[i];
        if (i + 1 < y.size()) s_first += y[i];
    }
    double L = (1.0 + eps) * n * (1.0 + s_all) -
               n * (n + 1.0) / (2.0 * (n - 1.0)) * (n * s_all - (n - 1.0) * s_first);
    double val = L - P_poly(n, 2.0 * y[0]);
    double run = 0.0;
    for (int j = 1; j <= n - 2; ++j) {
        run += y[static_cast<size_t>(j - 1)];
        double aj = (j + 2.0) / (j + 1.0) * y[static_cast<size_t>(j)] -
                    run / (j * (j + 1.0));
        double yj = y[static_cast<size_t>(j - 1)];
        if (yj <= 0.0) {
            if (std::abs(aj) <= 1e-15) continue;
            return kInf;
        }
        val -= yj * P_poly(n, aj / yj);
    }
    return val;
}

StationarySolution solve_S(int n, double eps) {
    if (n < 2) throw std::invalid_argument("solve_S: n must be >= 2");
    if (!(eps >= 0.0)) throw std::invalid_argument("solve_S: eps must be >= 0");
    StationarySolution sol;
    sol.n = n;
    sol.eps = eps;
    std::vector<double> alpha(static_cast<size_t>(n - 1));
    auto deriv = [n](double t) { return dP_poly(n, t); };
    auto invert = [&](double target) -> double {
        if (target > -1.0) return -1.0;  // no root with alpha >= 0
        return invert_decreasing(deriv, target, 0.0, 1.0, 1e-13);
    };
    double target = (n - 1.0) * (1.0 + eps) - n * (n + 1.0) / 2.0;
    double a = invert(target);
    if (a < 0.0) return sol;
    alpha[static_cast<size_t>(n - 2)] = a;
    if (n >= 3) {
        target = dP_poly(n, alpha[static_cast<size_t>(n - 2)]) +
                 (n * (n + 1.0) / 2.0 - beta_n(n, alpha[static_cast<size_t>(n - 2)])) *
                     (n - 2.0) / (n - 1.0);
        a = invert(target);
        if (a < 0.0) return sol;
        alpha[static_cast<size_t>(n - 3)] = a;
    }
    for (int j = n - 4; j >= 0; --j) {
        target = dP_poly(n, alpha[static_cast<size_t>(j + 1)]) +
                 (beta_n(n, alpha[static_cast<size_t>(j + 2)]) -
                  beta_n(n, alpha[static_cast<size_t>(j + 1)])) *
                     (j + 1.0) / (j + 2.0);
        a = invert(target);
        if (a < 0.0) return sol;
        alpha[static_cast<size_t>(j)] = a;
    }
    sol.alpha = std::move(alpha);
    sol.feasible = true;
    return sol;
}

void build_FO(StationarySolution& sol, bool check_gradient) {
    if (!sol.feasible) throw std::invalid_argument("build_FO: infeasible solution");
    const int n = sol.n;
    sol.x.assign(static_cast<size_t>(n + 1), 0.0);
    sol.x[1] = 1.0;
    if (n >= 2) sol.x[2] = 2.0 + sol.alpha[0];
    for (int j = 3; j <= n; ++j) {
        sol.x[static_cast<size_t>(j)] =
            (j - 1.0) * (sol.alpha[static_cast<size_t>(j - 2)] *
                             (sol.x[static_cast<size_t>(j - 1)] / (j - 1.0) -
                              sol.x[static_cast<size_t>(j - 2)] / (j - 2.0)) +
                         sol.x[static_cast<size_t>(j - 1)] / (j - 2.0) -
                         sol.x[1] / ((j - 1.0) * (j - 2.0)));
    }
    sol.y.assign(static_cast<size_t>(n - 1), 0.0);
    for (int l = 1; l <= n - 1; ++l)
        sol.y[static_cast<size_t>(l - 1)] =
            sol.x[static_cast<size_t>(l + 1)] / (l + 1.0) -
            sol.x[static_cast<size_t>(l)] / l;
    sol.upsilon = upsilon_value(n, sol.eps, sol.y);

    if (check_gradient) {
        // tolerance scales with the objective's own magnitude: the evaluation
        // carries O(eps_mach * n^2) rounding that the difference quotient
        // amplifies by 1/h
        double sum_y = 0.0;
        for (double yv : sol.y) sum_y += yv;
        const double mag = (1.0 + sol.eps) * n * (1.0 + sum_y) +
                           n * (n + 1.0) / 2.0 * (1.0 + sum_y);
        const double scale = 1e-5 * (1.0 + std::abs(sol.upsilon) + mag);
        std::vector<double> y = sol.y;
        for (size_t i = 0; i < y.size(); ++i) {
            if (y[i] <= 1e-12) continue;  // boundary coordinate, no interior FO
            double h = 1e-6 * std::max(std::abs(y[i]), 1e-3);
            if (h > 0.5 * y[i]) h = 0.5 * y[i];
            double keep = y[i];
            y[i] = keep + h;
            double up = upsilon_value(n, sol.eps, y);
            y[i] = keep - h;
            double dn = upsilon_value(n, sol.eps, y);
            y[i] = keep;
            double grad = (up - dn) / (2.0 * h);
            if (!(std::abs(grad) < scale))
                throw std::runtime_error("build_FO: stationarity check failed");
        }
    }
}

EpsilonResult epsilon_n(int n, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("epsilon_n: tol must be positive");
    if (n < 1) throw std::invalid_argument("epsilon_n: n must be >= 1");
    EpsilonResult res;
    res.n = n;
    if (n == 1) {
        res.eps_n = 0.0;
        res.eps_prime = 0.0;
        res.sol.n = 1;
        res.sol.feasible = true;
        res.sol.x = {0.0, 1.0};
        return res;
    }
    auto feasible = [n](double e) { return solve_S(n, e).feasible; };
    double hi = 1.0;
    int guard = 0;
    while (feasible(hi)) {
        hi *= 2.0;
        if (++guard > 60) throw std::runtime_error("epsilon_n: no feasibility boundary found");
    }
    res.eps_prime = bisect_predicate(feasible, 0.0, hi, tol);

    auto value_at = [n](double e) {
        StationarySolution s = solve_S(n, e);
        if (!s.feasible) return kInf;  // above the boundary: treat as positive
        build_FO(s, false);
        return s.upsilon;
    };
    if (value_at(0.0) >= 0.0) {
        res.eps_n = 0.0;
    } else {
        res.eps_n = bisect_predicate([&](double e) { return value_at(e) < 0.0; },
                                     0.0, res.eps_prime, tol);
    }
    res.sol = solve_S(n, res.eps_n);
    build_FO(res.sol, true);
    return res;
}

double mu_of(std::span<const double> T, int j) {
    if (j < 0 || T.size() < static_cast<size_t>(j) + 3)
        throw std::invalid_argument("mu_of: index out of range");
    if (j == 0) return 2.0 * (T[2] - T[1]);
    return (j + 2.0) / (j + 1.0) * T[static_cast<size_t>(j + 2)] -
           (j + 1.0) / j * T[static_cast<size_t>(j + 1)] + T[1] / (j * (j + 1.0));
}

bool check_conditions(std::span<const double> T, std::span<const double> mu,
                      double tol) {
    if (T.size() < 2 || mu.size() + 1 != T.size()) return false;
    if (std::abs(T[0]) > tol) return false;
    double prev_ratio = -kInf;
    for (size_t j = 0; j + 1 < T.size(); ++j) {
        double d = T[j + 1] - T[j];
        if (!(d > 0.0)) return false;
        if (mu[j] > d * (1.0 + tol) + tol) return false;
        double ratio = mu[j] / d;
        if (ratio < prev_ratio - tol) return false;
        prev_ratio = std::max(prev_ratio, ratio);
    }
    return true;
}

ThresholdSequence extend_sequence(const StationarySolution& sol, double eta,
                                  double tail_tol) {
    if (!sol.feasible || sol.n < 2 || sol.x.empty())
        throw std::invalid_argument("extend_sequence: need a built feasible solution");
    const int n = sol.n;
    const double eta0 = sol.alpha[static_cast<size_t>(n - 2)];
    if (!(eta >= eta0 && eta < 1.0))
        throw std::invalid_argument("extend_sequence: eta must lie in [alpha_{n-2}, 1)");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("extend_sequence: tail_tol must be positive");

    ThresholdSequence seq;
    seq.eta = eta;
    seq.T.reserve(1024);
    seq.T.push_back(0.0);
    for (int j = 1; j <= n; ++j)
        seq.T.push_back(sol.x[static_cast<size_t>(j)] / j);
    seq.limit = seq.T[static_cast<size_t>(n - 1)] +
                (sol.x[static_cast<size_t>(n)] - sol.x[static_cast<size_t>(n - 1)] -
                 sol.x[1]) /
                    ((1.0 - eta) * (n - 1.0));

    // d_{j+1} = ((j+1)/(j+2)) eta d_j + (T_{j+1} - 1)/(j(j+2))
    constexpr long long kMaxJ = 200000;
    long long j = n - 1;
    double d = seq.T[static_cast<size_t>(n)] - seq.T[static_cast<size_t>(n - 1)];
    while (d >= tail_tol && seq.limit - seq.T.back() >= tail_tol &&
           j < kMaxJ) {
        double t_next = seq.T.back();
        double d_next = (j + 1.0) / (j + 2.0) * eta * d +
                        (t_next - 1.0) / (static_cast<double>(j) * (j + 2.0));
        seq.T.push_back(t_next + d_next);
        d = d_next;
        ++j;
    }
    // mu_j by construction: alpha_j d_j on the head, eta d_j on the tail
    seq.mu.resize(seq.T.size() - 1);
    for (size_t i = 0; i + 1 < seq.T.size(); ++i) {
        double di = seq.T[i + 1] - seq.T[i];
        double level = i <= static_cast<size_t>(n - 2) ? sol.alpha[i] : eta;
        seq.mu[i] = level * di;
    }
    if (!check_conditions(seq.T, seq.mu, 1e-9))
        throw std::runtime_error("extend_sequence: constructed sequence violates conditions");
    return seq;
}

Distribution reconstruct_distribution(const ThresholdSequence& seq) {
    const size_t J = seq.T.size() - 1;
    if (seq.T.size() < 2 || seq.mu.size() != J)
        throw std::invalid_argument("reconstruct_distribution: malformed sequence");
    if (!check_conditions(seq.T, seq.mu, 1e-9))
        throw std::invalid_argument("reconstruct_distribution: sequence violates conditions");
    std::vector<std::pair<double, double>> atoms;
    double prev_level = 0.0;
    for (size_t j = 0; j < J; ++j) {
        double level = seq.mu[j] / (seq.T[j + 1] - seq.T[j]);
        double mass = level - prev_level;
        if (mass > 1e-14) atoms.emplace_back(seq.T[j], mass);
        prev_level = std::max(prev_level, level);
    }
    double top = std::isfinite(seq.limit) && seq.limit > seq.T.back()
                     ? seq.limit
                     : seq.T.back();
    double residual = 1.0 - prev_level;
    if (residual > 1e-14) atoms.emplace_back(top, residual);
    return Distribution::atomic(std::move(atoms));
}

WorstCaseReport verify_worst_case(int n, double tol, double eta, double eps_tol) {
    WorstCaseReport rep;
    rep.n = n;
    rep.eta = eta;
    if (n == 1) {
        rep.gamma = rep.ratio = 1.0;
        rep.g_value = rep.e_value = 1.0;
        rep.pass = true;
        return rep;
    }
    EpsilonResult res = epsilon_n(n, eps_tol);
    rep.eps_n = res.eps_n;
    rep.gamma = 1.0 / (1.0 + res.eps_n);
    ThresholdSequence seq = extend_sequence(res.sol, eta, 1e-12);
    Distribution h = reconstruct_distribution(seq);
    PolicyThresholds pol = optimal_thresholds(h, n);
    rep.g_value = pol.g[static_cast<size_t>(n)];
    rep.e_value = benchmark_exact(h, n);
    rep.ratio = rep.g_value / rep.e_value;
    rep.gap = (1.0 + res.eps_n) * rep.g_value - rep.e_value;
    // tail-sum bound plus the objective residual left by the eps bisection
    double sum_y = 0.0;
    for (double yv : res.sol.y) sum_y += yv;
    rep.gap_bound = (res.sol.x[static_cast<size_t>(n)] -
                     res.sol.x[static_cast<size_t>(n - 1)] - res.sol.x[1]) *
                        n * (n + 1.0) / 6.0 * (1.0 - eta) +
                    n * (1.0 + sum_y) * eps_tol;
    rep.pass = std::abs(rep.ratio - rep.gamma) <= tol && rep.gap >= -tol &&
               rep.gap <= rep.gap_bound;
    return rep;
}

}  // namespace potlab
