#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace potlab {

// Root of a continuous monotone-decreasing f on [lo, hi] with f(lo) >= target
// >= f(hi); bisects to absolute x-tolerance tol.
template <class F>
double invert_decreasing(F&& f, double target, double lo, double hi,
                         double tol = 1e-13, int max_iter = 200) {
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Bisection on a predicate: largest x in [lo, hi] with pred(x) true, assuming
// pred(lo) true and monotone switching. Returns the bracket midpoint.
template <class P>
double bisect_predicate(P&& pred, double lo, double hi, double tol,
                        int max_iter = 200) {
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimum of a unimodal f on [a, b] to x-tolerance tol.
// The stop test carries a relative term (an absolute tol is unreachable once
// the bracket shrinks to the ulp of large endpoints) and an iteration cap.
template <class F>
std::pair<double, double> golden_section_min(F&& f, double a, double b,
                                             double tol = 1e-10) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 300 &&
                     b - a > tol + 4e-16 * (std::abs(a) + std::abs(b));
         ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    return {x, f(x)};
}

// Bracketing scan followed by golden-section refinement; guards against the
// mild multimodality of the piecewise-smooth branch functions.
template <class F>
std::pair<double, double> scan_then_golden(F&& f, double a, double b,
                                           int npoints = 1000,
                                           double tol = 1e-10) {
    if (!(b > a)) return {a, f(a)};
    if (npoints < 3) npoints = 3;
    double best_x = a, best_v = f(a);
    double step = (b - a) / (npoints - 1);
    for (int i = 1; i < npoints; ++i) {
        double x = a + i * step;
        double v = f(x);
        if (v < best_v) { best_v = v; best_x = x; }
    }
    double lo = std::max(a, best_x - step);
    double hi = std::min(b, best_x + step);
    auto [x, v] = golden_section_min(f, lo, hi, tol);
    if (v < best_v) return {x, v};
    return {best_x, best_v};
}

// Adaptive Simpson quadrature to an absolute tolerance.
namespace detail {
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double integrate_simpson(F&& f, double a, double b, double abs_tol = 1e-10,
                         int max_depth = 48) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace potlab
