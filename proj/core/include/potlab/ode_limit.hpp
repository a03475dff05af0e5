#pragma once

#include <vector>

namespace potlab {

// h(u) = (1 - e^{-u}(1+u))/u^2, decreasing from 1/2 at u = 0; series patch
// near zero. h_inv inverts on (0, 1/2].
double h_kernel(double u);
double h_kernel_inv(double w);

enum class ShootClass { overshoot, undershoot, ambiguous };

struct OdeTracePoint {
    double x, H, I, u;
};

struct ShootResult {
    ShootClass outcome = ShootClass::ambiguous;
    double x_end = 0.0;
    double H_end = 0.0;
    double I_end = 0.0;
    long long steps = 0;
    std::vector<OdeTracePoint> trace;  // filled when requested
};

struct ShootParams {
    double delta = 1e-5;   // start at x = 1 - delta with the series patch
    double x_min = 1e-7;   // stop point near the singular left end
    double step = 1e-5;    // RK4 base step; refined to x/8 near x_min
    double u_cap = 1e8;    // u beyond this counts as blown up
    bool record_trace = false;
    int trace_stride = 100;
};

// Integrates dH/dx = (1+eps) x e^{-I}, dI/dx = -h_inv(H) backward from
// x = 1-delta. Overshoot: H hits h(u_cap) before x_min (u blew up).
// Undershoot: H(x_min) still above 10 h(u_cap). The cap must sit deep:
// sub-critical trajectories plateau at positive H while super-critical ones
// cross zero linearly, and the flip parameter only stabilizes once the floor
// h(u_cap) is far below every plateau of interest (shallow caps such as
// u_cap ~ 200 misread trajectories that are still descending at x_min and
// bias the flip upward).
ShootResult shoot(double eps, const ShootParams& p = {});

struct OdeResult {
    double eps_star = 0.0;
    double ratio = 0.0;  // 1/(1+eps_star)
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    long long steps = 0;
    int ambiguous_events = 0;
};

// Bisects eps on the shoot classification over the initial bracket [0, 2].
OdeResult asymptotic_epsilon(double tol, const ShootParams& p = {});

}  // namespace potlab
