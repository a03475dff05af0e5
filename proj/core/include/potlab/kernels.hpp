#pragma once

#include <stdexcept>

namespace potlab {

// P_n(t) = n - sum_{l=1..n} t^l and its derivative, as polynomials on all of
// R+ (the convex objective evaluates them past 1).
double P_poly(int n, double t);
double dP_poly(int n, double t);

// Domain-checked versions on [0,1]; P_n(1) = 0, dP_n(1) = -n(n+1)/2.
double P_n(int n, double t);
double dP_n(int n, double t);

// beta_n(t) = P_n(t) - t P_n'(t), increasing from n to n(n+1)/2 on [0,1].
double beta_n(int n, double t);

// g_n(v) = n - (1-v)(1-(1-v)^n)/v = sum_{t=1..n} (1 - (1-v)^t);
// series v*n(n+1)/2*(1 - v(n-1)/3) near v = 0.
double g_n(int n, double v);

// A_{l,l'}(q) = sum_{t=0..l'-1} (l-t)(1-q)^t, closed form with a series
// fallback for q below 1e-6 (the closed form divides by q^2).
double A_coeff(long long l, long long lp, double q);

// B_l(q) = sum_{t=0..l-1} (1-q)^t = (1-(1-q)^l)/q.
double B_coeff(long long l, double q);

// Asymptotic kernels: Abar_{phi,theta}(alpha) and gbar(lambda) =
// lambda * Abar_{1,1}(lambda).
double abar(double phi, double theta, double alpha);
double gbar(double lambda);

}  // namespace potlab
