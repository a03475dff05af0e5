#include "potlab/ode_limit.hpp"

#include <cmath>
#include <stdexcept>

namespace potlab {


double h_kernel(double u) {
    if (u < 0.0) throw std::invalid_argument("h_kernel: u must be >= 0");
    if (u < 0.15) {
        // sum_k (-1)^k (k+1)/(k+2)! u^k; the closed form loses ~2e-16/u^2
        // absolute to cancellation, so the series carries the small-u side
        // up to where the two error curves cross
        constexpr double c[] = {1.0 / 2,    -1.0 / 3,     1.0 / 8,
                                -1.0 / 30,  1.0 / 144,    -1.0 / 840,
                                1.0 / 5760, -1.0 / 45360, 1.0 / 403200};
        double s = 0.0;
        for (int k = 8; k >= 0; --k) s = s * u + c[k];
        return s;
    }
    return (1.0 - std::exp(-u) * (1.0 + u)) / (u * u);
}

double h_kernel_inv(double w) {
    if (!(w > 0.0 && w <= 0.5))
        throw std::invalid_argument("h_kernel_inv: w must lie in (0, 1/2]");
    if (w == 0.5) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (h_kernel(hi) > w) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e160) break;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        if (h_kernel(mid) > w)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ShootResult shoot(double eps, const ShootParams& p) {
    if (!(p.delta > 0.0 && p.delta <= 1e-2))
        throw std::invalid_argument("shoot: delta must lie in (0, 1e-2]");
    if (!(p.x_min > 0.0 && p.x_min < 1.0 - p.delta))
        throw std::invalid_argument("shoot: x_min must lie in (0, 1-delta)");
    if (!(p.u_cap > 1.0)) throw std::invalid_argument("shoot: u_cap must exceed 1");
    const double h_floor = h_kernel(p.u_cap);

    ShootResult res;
    // series init: h'(0) = -1/3 and H'(1) = 1+eps give u(1-d) ~ 3(1+eps)d
    double u0 = 3.0 * (1.0 + eps) * p.delta;
    double H = h_kernel(u0);
    double I = 1.5 * (1.0 + eps) * p.delta * p.delta;
    double x = 1.0 - p.delta;

    auto dH = [&](double xx, double ii) { return (1.0 + eps) * xx * std::exp(-ii); };
    auto dI = [&](double hh) { return -h_kernel_inv(hh); };

    while (x > p.x_min) {
        double s = std::min(p.step, x / 8.0);
        if (x - s < p.x_min) s = x - p.x_min;
        // RK4 going backward in x (step -s)
        double k1H = dH(x, I), k1I = dI(H);
        double H2 = H - 0.5 * s * k1H;
        if (H2 <= h_floor) { res.outcome = ShootClass::overshoot; res.x_end = x; res.H_end = H2; res.I_end = I; return res; }
        double k2H = dH(x - 0.5 * s, I - 0.5 * s * k1I), k2I = dI(H2);
        double H3 = H - 0.5 * s * k2H;
        if (H3 <= h_floor) { res.outcome = ShootClass::overshoot; res.x_end = x; res.H_end = H3; res.I_end = I; return res; }
        double k3H = dH(x - 0.5 * s, I - 0.5 * s * k2I), k3I = dI(H3);
        double H4 = H - s * k3H;
        if (H4 <= h_floor) { res.outcome = ShootClass::overshoot; res.x_end = x; res.H_end = H4; res.I_end = I; return res; }
        double k4H = dH(x - s, I - s * k3I), k4I = dI(H4);
        H -= s * (k1H + 2.0 * k2H + 2.0 * k3H + k4H) / 6.0;
        I -= s * (k1I + 2.0 * k2I + 2.0 * k3I + k4I) / 6.0;
        x -= s;
        ++res.steps;
        if (p.record_trace && res.steps % p.trace_stride == 0)
            res.trace.push_back({x, H, I, H > h_floor ? h_kernel_inv(H) : p.u_cap});
        if (H <= h_floor) {
            res.outcome = ShootClass::overshoot;
            res.x_end = x; res.H_end = H; res.I_end = I;
            return res;
        }
    }
    res.x_end = x;
    res.H_end = H;
    res.I_end = I;
    res.outcome = H >= 10.0 * h_floor ? ShootClass::undershoot : ShootClass::ambiguous;
    return res;
}

OdeResult asymptotic_epsilon(double tol, const ShootParams& p) {
    if (!(tol > 0.0)) throw std::invalid_argument("asymptotic_epsilon: tol must be positive");
    OdeResult out;
    double lo = 0.0, hi = 2.0;
    {
        ShootResult a = shoot(lo, p), b = shoot(hi, p);
        out.steps += a.steps + b.steps;
        if (a.outcome != ShootClass::undershoot || b.outcome != ShootClass::overshoot)
            throw std::runtime_error("asymptotic_epsilon: no sign change on [0, 2]");
    }
    const double h_floor = h_kernel(p.u_cap);
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        ShootResult r = shoot(mid, p);
        out.steps += r.steps;
        ShootClass c = r.outcome;
        if (c == ShootClass::ambiguous) {
            // one x_min shrink, then split on the geometric mid of the floor band
            ShootParams q = p;
            q.x_min = p.x_min / 10.0;
            ShootResult r2 = shoot(mid, q);
            out.steps += r2.steps;
            c = r2.outcome;
            if (c == ShootClass::ambiguous) {
                ++out.ambiguous_events;
                c = r2.H_end >= std::sqrt(10.0) * h_floor ? ShootClass::undershoot
                                                          : ShootClass::overshoot;
            }
        }
        if (c == ShootClass::undershoot)
            lo = mid;
        else
            hi = mid;
    }
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.eps_star = 0.5 * (lo + hi);
    out.ratio = 1.0 / (1.0 + out.eps_star);
    return out;
}

}  // namespace potlab
