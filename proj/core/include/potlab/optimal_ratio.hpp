#pragma once

#include <span>
#include <vector>

#include "potlab/distribution.hpp"
#include "potlab/kernels.hpp"

namespace potlab {

// Stationary point of the convex objective at a given (n, eps): the backward
// ladder alpha_0 < ... < alpha_{n-2}, the value sequence x_1..x_n, the
// difference variables y_l = x_{l+1}/(l+1) - x_l/l.
struct StationarySolution {
    int n = 0;
    double eps = 0.0;
    std::vector<double> alpha;  // alpha[j], j = 0..n-2
    std::vector<double> x;      // x[1..n]; x[0] unused
    std::vector<double> y;      // y[l-1] = y_l, l = 1..n-1
    double upsilon = 0.0;
    bool feasible = false;
};

// A_j(y_1..y_{j+1}) = ((j+2)/(j+1)) y_{j+1} - (1/(j(j+1))) sum_{l<=j} y_l,
// 1-based j in [1, n-2]; y is 0-based.
double a_j(std::span<const double> y, int j);

// Membership in the polyhedron K_n = {y >= 0, A_j(y) >= 0} within tol.
bool in_Kn(std::span<const double> y, double tol = 1e-12);

// Objective L_{n,eps}(y) - P_n(2 y_1) - sum_j y_j P_n(A_j/y_j). Directions
// with y_j = 0 and A_j != 0 evaluate to +inf.
double upsilon_value(int n, double eps, std::span<const double> y);

// Solves the backward scalar system for alpha; infeasible (alpha would leave
// [0,1)) is a returned state, not an error.
StationarySolution solve_S(int n, double eps);

// Fills x, y, upsilon from sol.alpha via the first-order recursion; when
// check_gradient is set, verifies stationarity by central differences and
// throws std::runtime_error on failure.
void build_FO(StationarySolution& sol, bool check_gradient = true);

struct EpsilonResult {
    int n = 0;
    double eps_n = 0.0;
    double eps_prime = 0.0;  // feasibility boundary sup{eps : solvable}
    StationarySolution sol;
};

// gamma_n = 1/(1 + eps_n): bisects the feasibility boundary, then the sign of
// the optimal objective value, each to tol.
EpsilonResult epsilon_n(int n, double tol = 1e-9);

// Threshold sequence T_0..T_J extended geometrically with ratio eta past the
// first n entries; `limit` is the analytic limit of T_j (from the tail-sum
// identity), used as the closure-atom location.
struct ThresholdSequence {
    std::vector<double> T;   // T_0..T_J
    std::vector<double> mu;  // mu_0..mu_{J-1}
    double eta = 0.0;
    double limit = std::numeric_limits<double>::quiet_NaN();
};

double mu_of(std::span<const double> T, int j);

// Validates T_0 = 0, strict increase, mu_j <= T_{j+1}-T_j, and non-decreasing
// ratios mu_j/(T_{j+1}-T_j).
bool check_conditions(std::span<const double> T, std::span<const double> mu,
                      double tol = 1e-9);

ThresholdSequence extend_sequence(const StationarySolution& sol, double eta,
                                  double tail_tol = 1e-12);

// Piecewise-constant-CDF distribution with level mu_j/(T_{j+1}-T_j) on
// [T_j, T_{j+1}); the residual mass sits at `limit` when present, else at T_J.
Distribution reconstruct_distribution(const ThresholdSequence& seq);

struct WorstCaseReport {
    int n = 0;
    double eps_n = 0.0;
    double gamma = 0.0;   // 1/(1+eps_n)
    double eta = 0.0;
    double g_value = 0.0; // G_n(H)
    double e_value = 0.0; // E_n(H)
    double ratio = 0.0;   // G_n(H)/E_n(H)
    double gap = 0.0;     // (1+eps_n) G_n(H) - E_n(H)
    double gap_bound = 0.0;
    bool pass = false;
};

WorstCaseReport verify_worst_case(int n, double tol, double eta = 1.0 - 1e-4,
                                  double eps_tol = 1e-9);

}  // namespace potlab
