#include "potlab/kernels.hpp"

#include <cmath>
#include <string>

namespace potlab {

double P_poly(int n, double t) {
    // Horner on sum_{l=1..n} t^l = t(1 + t(1 + ...))
    double s = 0.0;
    for (int l = 0; l < n; ++l) s = t * (1.0 + s);
    return n - s;
}

double dP_poly(int n, double t) {
    // sum_{l=1..n} l t^{l-1}, Horner from the top
    double s = 0.0;
    for (int l = n; l >= 1; --l) s = s * t + l;
    return -s;
}

static void check_unit(double t, const char* who) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument(std::string(who) + ": argument outside [0,1]");
}

double P_n(int n, double t) {
    check_unit(t, "P_n");
    return P_poly(n, t);
}

double dP_n(int n, double t) {
    check_unit(t, "dP_n");
    return dP_poly(n, t);
}

double beta_n(int n, double t) {
    check_unit(t, "beta_n");
    return P_poly(n, t) - t * dP_poly(n, t);
}

double g_n(int n, double v) {
    if (v < 1e-6) {
        double nn = static_cast<double>(n);
        return v * nn * (nn + 1.0) / 2.0 * (1.0 - v * (nn - 1.0) / 3.0);
    }
    double pw = std::exp(n * std::log1p(-v));  // (1-v)^n
    return n - (1.0 - v) * (1.0 - pw) / v;
}

double A_coeff(long long l, long long lp, double q) {
    double L = static_cast<double>(l), Lp = static_cast<double>(lp);
    if (q < 1e-6) {
        double c0 = L * Lp - Lp * (Lp - 1.0) / 2.0;
        double c1 = L * Lp * (Lp - 1.0) / 2.0 - Lp * (Lp - 1.0) * (2.0 * Lp - 1.0) / 6.0;
        return c0 - q * c1;
    }
    double pw = std::exp(Lp * std::log1p(-q));  // (1-q)^{l'}
    return (pw * (1.0 - (L - Lp + 1.0) * q) + q * (L + 1.0) - 1.0) / (q * q);
}

double B_coeff(long long l, double q) {
    double L = static_cast<double>(l);
    if (q < 1e-6) return L - L * (L - 1.0) * q / 2.0;
    return -std::expm1(L * std::log1p(-q)) / q;
}

double abar(double phi, double theta, double alpha) {
    if (alpha < 1e-6) {
        double c0 = phi * theta - theta * theta / 2.0;
        double c1 = theta * theta * theta / 3.0 - theta * theta * phi / 2.0;
        return c0 + alpha * c1;
    }
    return (std::exp(-alpha * theta) * (1.0 - (phi - theta) * alpha) +
            alpha * phi - 1.0) /
           (alpha * alpha);
}

double gbar(double lambda) {
    if (lambda < 1e-6) return lambda / 2.0 - lambda * lambda / 6.0;
    return (std::expm1(-lambda) + lambda) / lambda;
}

}  // namespace potlab
