#include "potlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "potlab/numerics.hpp"
#include "potlab/rng.hpp"

namespace potlab {

BoundEvaluation key_lower_bound(int n, const ThresholdSchedule& sched) {
    if (sched.n != n) throw std::invalid_argument("key_lower_bound: schedule/n mismatch");
    const int k = sched.k();
    std::vector<double> w(k), A(k), q(k);
    double acc = 1.0;
    for (int s = k - 1; s >= 0; --s) {
        q[s] = sched.quantiles[static_cast<size_t>(s)];
        w[s] = acc;
        A[s] = A_coeff(sched.cum[static_cast<size_t>(s)],
                       sched.lengths[static_cast<size_t>(s)], q[s]);
        acc *= std::exp(sched.lengths[static_cast<size_t>(s)] * std::log1p(-q[s]));
    }
    double sum_wA = 0.0, sum_wqA = 0.0;
    for (int s = 0; s < k; ++s) {
        sum_wA += w[s] * A[s];
        sum_wqA += w[s] * q[s] * A[s];
    }
    auto phi = [&](double v) {
        double num = 0.0;
        for (int s = 0; s < k; ++s) num += w[s] * std::min(v, q[s]) * A[s];
        return num / g_n(n, v);
    };
    // v -> 0 limit of v/g_n(v) is 2/(n(n+1))
    double best = 2.0 / (static_cast<double>(n) * (n + 1.0)) * sum_wA;
    double best_v = 0.0;
    {
        double at1 = sum_wqA / g_n(n, 1.0);
        if (at1 < best) { best = at1; best_v = 1.0; }
    }
    // q's ascending define the segment grid; [0,q_min] and [q_max,1] are
    // monotone, the mixed segments get a scan + golden-section pass.
    std::vector<double> grid(q.rbegin(), q.rend());
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        auto [x, v] = scan_then_golden(phi, grid[i], grid[i + 1], 1000, 1e-10);
        if (v < best) { best = v; best_v = x; }
    }
    BoundEvaluation ev;
    ev.value = best;
    ev.argmin_v = best_v;
    ev.params.push_back(n);
    for (double qq : sched.quantiles) ev.params.push_back(qq);
    for (int l : sched.lengths) ev.params.push_back(l);
    return ev;
}

double single_threshold_bound(int n, double alpha) {
    if (!(alpha >= 1.0)) throw std::invalid_argument("single_threshold_bound: alpha must be >= 1");
    if (!(static_cast<double>(n) >= alpha * alpha + alpha - 1.0))
        throw std::invalid_argument("single_threshold_bound: requires n >= alpha^2 + alpha - 1");
    return (1.0 - alpha * alpha / (n + 1.0 - alpha)) * std::min(2.0, alpha) *
           (std::expm1(-alpha) + alpha) / (alpha * alpha);
}

double single_threshold_bound_asymptotic(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    return std::min(2.0, alpha) * abar(1.0, 1.0, alpha);
}

BoundEvaluation two_threshold_asymptotic(double alpha1, double alpha2,
                                         double theta) {
    if (!(0.0 < alpha2 && alpha2 < alpha1))
        throw std::invalid_argument("two_threshold_asymptotic: need 0 < alpha2 < alpha1");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("two_threshold_asymptotic: theta must be in (0,1)");
    const double A2 = abar(1.0, theta, alpha2);
    const double A1 = abar(1.0 - theta, 1.0 - theta, alpha1);
    const double w = std::exp(-alpha2 * theta);
    const double b1 = 2.0 * (A2 + A1 * w);
    const double b2 = alpha2 * A2 + alpha1 * A1 * w;
    auto branch3 = [&](double lam) {
        return (alpha2 * A2 + lam * A1 * w) / gbar(lam);
    };
    auto [lam_star, b3] = scan_then_golden(branch3, alpha2, alpha1, 1000, 1e-10);
    BoundEvaluation ev;
    ev.value = std::min({b1, b2, b3});
    ev.argmin_v = ev.value == b3 ? lam_star : (ev.value == b1 ? 0.0 : 1.0);
    ev.params = {0.0, alpha1, alpha2, theta};
    return ev;
}

BoundEvaluation equidistant_asymptotic(const std::vector<double>& alphas) {
    const int k = static_cast<int>(alphas.size());
    if (k < 1) throw std::invalid_argument("equidistant_asymptotic: empty alphas");
    for (int t = 0; t < k; ++t) {
        if (!(alphas[static_cast<size_t>(t)] > 0.0))
            throw std::invalid_argument("equidistant_asymptotic: alphas must be positive");
        if (t > 0 && !(alphas[static_cast<size_t>(t)] < alphas[static_cast<size_t>(t - 1)]))
            throw std::invalid_argument("equidistant_asymptotic: alphas must be strictly decreasing");
    }
    std::vector<double> Et(k), At(k);
    for (int t = 0; t < k; ++t) {
        double tail = 0.0;
        for (int tau = t + 1; tau < k; ++tau) tail += alphas[static_cast<size_t>(tau)];
        Et[t] = std::exp(-tail / k);
        At[t] = abar((t + 1.0) / k, 1.0 / k, alphas[static_cast<size_t>(t)]);
    }
    double b1 = 0.0, b2 = 0.0;
    for (int t = 0; t < k; ++t) {
        b1 += Et[t] * At[t];
        b2 += alphas[static_cast<size_t>(t)] * Et[t] * At[t];
    }
    b1 *= 2.0;
    double best = std::min(b1, b2);
    double best_lam = best == b1 ? 0.0 : 1.0;
    for (int j = 1; j < k; ++j) {
        double s_le = 0.0, s_gt = 0.0;
        for (int t = 0; t < j; ++t) s_le += Et[t] * At[t];
        for (int t = j; t < k; ++t) s_gt += alphas[static_cast<size_t>(t)] * Et[t] * At[t];
        auto branch = [&](double lam) { return (lam * s_le + s_gt) / gbar(lam); };
        auto [lam, v] = scan_then_golden(branch, alphas[static_cast<size_t>(j)],
                                         alphas[static_cast<size_t>(j - 1)], 1000, 1e-10);
        if (v < best) { best = v; best_lam = lam; }
    }
    BoundEvaluation ev;
    ev.value = best;
    ev.argmin_v = best_lam;
    ev.params.push_back(0.0);
    for (double a : alphas) ev.params.push_back(a);
    return ev;
}

namespace {

struct Objective {
    OptimizeSpec spec;
    int dim() const {
        switch (spec.kind) {
            case BoundKind::single_n:
            case BoundKind::single_asymptotic: return 1;
            case BoundKind::two_asymptotic: return 3;
            case BoundKind::equidistant: return spec.k;
        }
        return 1;
    }
    double alpha_max() const {
        // n >= a^2 + a - 1
        return 0.5 * (-1.0 + std::sqrt(4.0 * spec.n + 5.0));
    }
    // x holds log(alpha)s (descending) and, for two_asymptotic, logit(theta)
    double eval(const std::vector<double>& x) const {
        switch (spec.kind) {
            case BoundKind::single_n: {
                double a = std::exp(x[0]);
                if (a < 1.0 || a > alpha_max()) return -1.0;
                return single_threshold_bound(spec.n, a);
            }
            case BoundKind::single_asymptotic: {
                double a = std::exp(x[0]);
                return single_threshold_bound_asymptotic(a);
            }
            case BoundKind::two_asymptotic: {
                double a1 = std::exp(x[0]), a2 = std::exp(x[1]);
                double th = 1.0 / (1.0 + std::exp(-x[2]));
                if (!(a2 < a1) || !(th > 1e-9 && th < 1.0 - 1e-9)) return -1.0;
                return two_threshold_asymptotic(a1, a2, th).value;
            }
            case BoundKind::equidistant: {
                std::vector<double> a(x.size());
                for (size_t i = 0; i < x.size(); ++i) a[i] = std::exp(x[i]);
                for (size_t i = 1; i < a.size(); ++i)
                    if (!(a[i] < a[i - 1])) return -1.0;
                return equidistant_asymptotic(a).value;
            }
        }
        return -1.0;
    }
    // ladder-style starts: alpha_1 log-uniform, successive ratios log-uniform;
    // this matches the decreasing-quantile geometry of the optima
    std::vector<double> random_start(Rng& rng) const {
        switch (spec.kind) {
            case BoundKind::single_n: {
                double hi = std::log(std::min(alpha_max(), 60.0));
                return {rng.uniform01() * hi};
            }
            case BoundKind::single_asymptotic:
                return {std::log(0.2) + rng.uniform01() * (std::log(20.0) - std::log(0.2))};
            case BoundKind::two_asymptotic: {
                double l1 = std::log(0.2) + rng.uniform01() * (std::log(200.0) - std::log(0.2));
                double l2 = l1 - (std::log(1.2) + rng.uniform01() *
                                                      (std::log(40.0) - std::log(1.2)));
                double th = 0.05 + 0.9 * rng.uniform01();
                return {l1, l2, std::log(th / (1.0 - th))};
            }
            case BoundKind::equidistant: {
                std::vector<double> l(static_cast<size_t>(spec.k));
                l[0] = std::log(0.5) + rng.uniform01() * (std::log(500.0) - std::log(0.5));
                for (size_t i = 1; i < l.size(); ++i)
                    l[i] = l[i - 1] - (std::log(1.2) +
                                       rng.uniform01() * (std::log(40.0) - std::log(1.2)));
                return l;
            }
        }
        return {0.0};
    }
};

// Coordinate search with multiplicatively shrinking steps.
double coordinate_search(const Objective& obj, std::vector<double>& x,
                         double step0 = 0.5, double step_min = 1e-7) {
    double best = obj.eval(x);
    double step = step0;
    int guard = 0;
    while (step > step_min && guard++ < 4000) {
        bool improved = false;
        for (size_t i = 0; i < x.size(); ++i) {
            for (double dir : {+1.0, -1.0}) {
                std::vector<double> y = x;
                y[i] += dir * step;
                double v = obj.eval(y);
                if (v > best) {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

// Nelder-Mead simplex (maximization). The bound objectives are minima of
// smooth branches; axis-aligned moves stall on their curved ridges, so the
// simplex does the climbing and coordinate search only polishes.
double nelder_mead_max(const Objective& obj, std::vector<double>& x,
                       double init_step, int iters) {
    const size_t d = x.size();
    std::vector<std::vector<double>> pts(d + 1, x);
    std::vector<double> val(d + 1);
    for (size_t i = 0; i < d; ++i) pts[i + 1][i] += init_step;
    for (size_t i = 0; i <= d; ++i) val[i] = obj.eval(pts[i]);
    for (int it = 0; it < iters; ++it) {
        std::vector<size_t> idx(d + 1);
        for (size_t i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](size_t a, size_t b) { return val[a] > val[b]; });
        std::vector<std::vector<double>> np(d + 1);
        std::vector<double> nv(d + 1);
        for (size_t i = 0; i <= d; ++i) {
            np[i] = pts[idx[i]];
            nv[i] = val[idx[i]];
        }
        pts = std::move(np);
        val = std::move(nv);
        std::vector<double> centroid(d, 0.0);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) centroid[j] += pts[i][j] / d;
        auto along = [&](double t) {
            std::vector<double> y(d);
            for (size_t j = 0; j < d; ++j)
                y[j] = centroid[j] + t * (pts[d][j] - centroid[j]);
            return y;
        };
        auto refl = along(-1.0);
        double fr = obj.eval(refl);
        if (fr > val[0]) {
            auto ext = along(-2.0);
            double fe = obj.eval(ext);
            if (fe > fr) {
                pts[d] = std::move(ext);
                val[d] = fe;
            } else {
                pts[d] = std::move(refl);
                val[d] = fr;
            }
        } else if (fr > val[d - 1]) {
            pts[d] = std::move(refl);
            val[d] = fr;
        } else {
            auto con = along(0.5);
            double fc = obj.eval(con);
            if (fc > val[d]) {
                pts[d] = std::move(con);
                val[d] = fc;
            } else {
                for (size_t i = 1; i <= d; ++i) {
                    for (size_t j = 0; j < d; ++j)
                        pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
                    val[i] = obj.eval(pts[i]);
                }
            }
        }
    }
    size_t bi = 0;
    for (size_t i = 1; i <= d; ++i)
        if (val[i] > val[bi]) bi = i;
    x = pts[bi];
    return val[bi];
}

}  // namespace

BoundEvaluation optimize_bound(const OptimizeSpec& spec, int restarts,
                               std::uint64_t seed) {
    if (restarts < 1) restarts = 1;
    Objective obj{spec};
    std::vector<double> vals(static_cast<size_t>(restarts), -1.0);
    std::vector<std::vector<double>> xs(static_cast<size_t>(restarts));
    parallel_chunks(restarts, 1, [&](long long c, long long b, long long) {
        (void)c;
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(b));
        std::vector<double> x = obj.random_start(rng);
        double v = x.size() > 1 ? nelder_mead_max(obj, x, 0.5, 500)
                                : coordinate_search(obj, x);
        vals[static_cast<size_t>(b)] = v;
        xs[static_cast<size_t>(b)] = std::move(x);
    });
    size_t best = 0;
    for (size_t i = 1; i < vals.size(); ++i)
        if (vals[i] > vals[best]) best = i;
    std::vector<double> x = xs[best];
    if (x.size() > 1) nelder_mead_max(obj, x, 0.05, 400);
    coordinate_search(obj, x, 0.02, 1e-9);  // polish

    switch (spec.kind) {
        case BoundKind::single_n: {
            BoundEvaluation ev;
            ev.params = {static_cast<double>(spec.n), std::exp(x[0])};
            ev.value = single_threshold_bound(spec.n, std::exp(x[0]));
            ev.argmin_v = std::exp(x[0]);
            return ev;
        }
        case BoundKind::single_asymptotic: {
            BoundEvaluation ev;
            ev.params = {0.0, std::exp(x[0])};
            ev.value = single_threshold_bound_asymptotic(std::exp(x[0]));
            ev.argmin_v = std::exp(x[0]);
            return ev;
        }
        case BoundKind::two_asymptotic: {
            double th = 1.0 / (1.0 + std::exp(-x[2]));
            return two_threshold_asymptotic(std::exp(x[0]), std::exp(x[1]), th);
        }
        case BoundKind::equidistant: {
            std::vector<double> a(x.size());
            for (size_t i = 0; i < x.size(); ++i) a[i] = std::exp(x[i]);
            return equidistant_asymptotic(a);
        }
    }
    return {};
}

HardInstanceLimits hard_instance_limits(double beta) {
    if (!(beta >= 1.0)) throw std::invalid_argument("hard_instance_limits: beta must be >= 1");
    const double e2 = std::exp(2.0);
    const double a = 2.0 * (e2 - 3.0) / (e2 + 1.0);
    const double b = 4.0 / (e2 + 1.0);
    auto temp = [&](double lam) {
        return (std::expm1(-lam) + lam) * (a + lam * b) / (lam * lam);
    };
    HardInstanceLimits lim;
    lim.e_limit = a / 2.0 + b * (std::expm1(-beta) + beta) / beta;
    lim.alg_upper = std::max({a / 2.0,
                              (a + b * beta) * (std::expm1(-beta) + beta) / (beta * beta),
                              temp(std::min(2.0, beta))});
    return lim;
}

}  // namespace potlab
