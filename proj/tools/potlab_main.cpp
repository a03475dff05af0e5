// potlab: prophet-inequality-over-time and secretary-over-time workbench.
// Subcommands: gamma, bounds, simulate, thresholds, ode, secretary.
// Emits JSON lines (or CSV); identical flags and seed give byte-identical
// output regardless of POTLAB_THREADS.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "potlab/bounds.hpp"
#include "potlab/ode_limit.hpp"
#include "potlab/optimal_ratio.hpp"
#include "potlab/policy.hpp"
#include "potlab/secretary.hpp"
#include "potlab/spec_io.hpp"

using json = nlohmann::ordered_json;
using namespace potlab;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240642;  // fixed, documented in README

struct Output {
    std::string path = "-";
    std::string format = "json";
    std::vector<json> records;

    void add(json j) { records.push_back(std::move(j)); }

    static std::string scalar(const json& v) { return v.dump(); }

    std::string render_csv() const {
        std::ostringstream os;
        if (records.empty()) return {};
        const json& first = records.front();
        bool head = true;
        for (auto it = first.begin(); it != first.end(); ++it) {
            if (!head) os << ",";
            os << it.key();
            head = false;
        }
        os << "\n";
        for (const json& r : records) {
            bool lead = true;
            for (auto it = r.begin(); it != r.end(); ++it) {
                if (!lead) os << ",";
                lead = false;
                if (it.value().is_array()) {
                    os << '"';
                    for (size_t i = 0; i < it.value().size(); ++i) {
                        if (i) os << ';';
                        os << scalar(it.value()[i]);
                    }
                    os << '"';
                } else {
                    os << scalar(it.value());
                }
            }
            os << "\n";
        }
        return os.str();
    }

    std::string render_jsonl() const {
        std::ostringstream os;
        for (const json& r : records) os << r.dump() << "\n";
        return os.str();
    }

    void flush() const {
        std::string text = format == "csv" ? render_csv() : render_jsonl();
        if (path == "-") {
            std::cout << text;
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot open output file: " + path);
            f << text;
        }
    }
};

void add_output_flags(CLI::App* cmd, Output& out) {
    cmd->add_option("--out", out.path, "Output path ('-' for stdout)")
        ->capture_default_str();
    cmd->add_option("--format", out.format, "Output format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

std::pair<int, int> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos)
        throw std::invalid_argument("--n-range expects A..B");
    int a = std::stoi(text.substr(0, dots));
    int b = std::stoi(text.substr(dots + 2));
    if (a < 1 || b < a) throw std::invalid_argument("--n-range expects 1 <= A <= B");
    return {a, b};
}

Distribution load_dist(const std::string& spec) {
    if (!spec.empty() && (spec.front() == '{' || spec.front() == '['))
        return parse_distribution_spec(spec);
    std::ifstream f(spec);
    if (!f) throw std::invalid_argument("cannot open distribution spec: " + spec);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_distribution_spec(ss.str());
}

// ---------------------------------------------------------------- gamma ----
struct GammaArgs {
    int n = 0;
    std::string n_range;
    double tol = 1e-9;
    double verify_tol = 1e-2;
    double eta = 1.0 - 1e-4;
    Output out;
};

int run_gamma(const GammaArgs& a) {
    int lo = a.n, hi = a.n;
    if (!a.n_range.empty()) std::tie(lo, hi) = parse_range(a.n_range);
    if (lo < 1) throw std::invalid_argument("gamma: need --n or --n-range");
    const int count = hi - lo + 1;
    std::vector<WorstCaseReport> reports(static_cast<size_t>(count));
    std::vector<double> eps_prime(static_cast<size_t>(count), 0.0);
    std::vector<double> residual(static_cast<size_t>(count), 0.0);
    parallel_chunks(count, 1, [&](long long, long long b, long long) {
        int n = lo + static_cast<int>(b);
        if (n > 1) {
            auto res = epsilon_n(n, a.tol);
            eps_prime[static_cast<size_t>(b)] = res.eps_prime;
            residual[static_cast<size_t>(b)] = res.sol.upsilon;
        }
        reports[static_cast<size_t>(b)] = verify_worst_case(n, a.verify_tol, a.eta, a.tol);
    });
    Output out = a.out;
    bool all_verified = true;
    for (int i = 0; i < count; ++i) {
        const auto& r = reports[static_cast<size_t>(i)];
        all_verified = all_verified && r.pass;
        out.add(json{{"n", r.n},
                     {"eps_n", r.eps_n},
                     {"gamma_n", r.gamma},
                     {"eps_prime_n", eps_prime[static_cast<size_t>(i)]},
                     {"upsilon_residual", residual[static_cast<size_t>(i)]},
                     {"verified", r.pass},
                     {"ratio_of_reconstruction", r.ratio},
                     {"tol", a.tol},
                     {"verify_tol", a.verify_tol},
                     {"eta", a.eta}});
    }
    out.flush();
    return all_verified ? 0 : 3;
}

// --------------------------------------------------------------- bounds ----
struct BoundsArgs {
    std::string kind = "single";
    int n = 0;
    double alpha = 2.0;
    std::vector<double> alphas;
    double theta = 0.5;
    std::vector<double> quantiles;
    std::vector<int> lengths;
    bool optimize = false;
    int restarts = 100;
    int k = 3;
    std::uint64_t seed = kDefaultSeed;
    std::string alpha_range;
    int alpha_steps = 0;
    Output out;
};

json bound_record(const BoundsArgs& a, const BoundEvaluation& ev) {
    return json{{"kind", a.kind},
                {"value", ev.value},
                {"argmin_v", ev.argmin_v},
                {"params", ev.params}};
}

int run_bounds(const BoundsArgs& a) {
    Output out = a.out;
    if (a.optimize) {
        OptimizeSpec spec;
        if (a.kind == "single") {
            spec.kind = a.n > 0 ? BoundKind::single_n : BoundKind::single_asymptotic;
            spec.n = a.n;
        } else if (a.kind == "two") {
            spec.kind = BoundKind::two_asymptotic;
        } else if (a.kind == "equidistant") {
            spec.kind = BoundKind::equidistant;
            spec.k = a.k;
        } else {
            throw std::invalid_argument("bounds --optimize supports single|two|equidistant");
        }
        auto ev = optimize_bound(spec, a.restarts, a.seed);
        json j = bound_record(a, ev);
        j["restarts"] = a.restarts;
        j["seed"] = a.seed;
        out.add(std::move(j));
        out.flush();
        return 0;
    }
    if (a.kind == "single") {
        auto eval_one = [&](double alpha) {
            double v = a.n > 0 ? single_threshold_bound(a.n, alpha)
                               : single_threshold_bound_asymptotic(alpha);
            out.add(json{{"kind", a.kind}, {"n", a.n}, {"alpha", alpha}, {"value", v}});
        };
        if (!a.alpha_range.empty()) {
            auto dots = a.alpha_range.find("..");
            if (dots == std::string::npos || a.alpha_steps < 2)
                throw std::invalid_argument("--alpha-range A..B needs --alpha-steps >= 2");
            double lo = std::stod(a.alpha_range.substr(0, dots));
            double hi = std::stod(a.alpha_range.substr(dots + 2));
            for (int i = 0; i < a.alpha_steps; ++i)
                eval_one(lo + (hi - lo) * i / (a.alpha_steps - 1));
        } else {
            eval_one(a.alpha);
        }
    } else if (a.kind == "two") {
        if (a.alphas.size() != 2)
            throw std::invalid_argument("bounds --kind two needs --alphas a1,a2");
        out.add(bound_record(a, two_threshold_asymptotic(a.alphas[0], a.alphas[1], a.theta)));
    } else if (a.kind == "equidistant") {
        if (a.alphas.empty())
            throw std::invalid_argument("bounds --kind equidistant needs --alphas");
        out.add(bound_record(a, equidistant_asymptotic(a.alphas)));
    } else if (a.kind == "key") {
        if (a.n < 1 || a.quantiles.empty() || a.lengths.size() != a.quantiles.size())
            throw std::invalid_argument("bounds --kind key needs --n, --quantiles, --lengths");
        auto sched = ThresholdSchedule::make(a.n, a.lengths, a.quantiles);
        out.add(bound_record(a, key_lower_bound(a.n, sched)));
    } else if (a.kind == "hard-limits") {
        auto lim = hard_instance_limits(a.alpha);
        out.add(json{{"kind", a.kind},
                     {"beta", a.alpha},
                     {"e_limit", lim.e_limit},
                     {"alg_upper", lim.alg_upper},
                     {"ub_ratio", lim.alg_upper / lim.e_limit}});
    } else {
        throw std::invalid_argument("unknown bounds kind: " + a.kind);
    }
    out.flush();
    return 0;
}

// ------------------------------------------------------------- simulate ----
struct SimulateArgs {
    std::string dist;
    int n = 0;
    std::string policy = "optimal";
    std::vector<double> quantiles;
    std::vector<int> lengths;
    long long trials = 100000;
    std::uint64_t seed = kDefaultSeed;
    Output out;
};

json report_json(const SimulationReport& r) {
    return json{{"value", r.value},   {"benchmark", r.benchmark},
                {"ratio", r.ratio},   {"half_width", r.half_width},
                {"trials", r.trials}, {"seed", r.seed}};
}

int run_simulate(const SimulateArgs& a) {
    if (a.n < 1) throw std::invalid_argument("simulate: need --n >= 1");
    Distribution dist = load_dist(a.dist);
    SimulationReport rep;
    double exact = 0.0;
    if (a.policy == "optimal") {
        auto pol = optimal_thresholds(dist, a.n);
        rep = simulate_policy(dist, a.n, pol, a.trials, a.seed);
        exact = pol.g[static_cast<size_t>(a.n)];
    } else if (a.policy == "schedule") {
        auto sched = ThresholdSchedule::make(a.n, a.lengths, a.quantiles);
        rep = simulate_policy(dist, a.n, sched, a.trials, a.seed);
        exact = kthreshold_value_exact(dist, sched);
    } else {
        throw std::invalid_argument("simulate --policy must be optimal or schedule");
    }
    Output out = a.out;
    json j{{"policy", a.policy}, {"n", a.n}};
    j.update(report_json(rep));
    j["exact_value"] = exact;
    j["dist"] = json::parse(distribution_spec_json(dist));
    out.add(std::move(j));
    out.flush();
    return 0;
}

// ----------------------------------------------------------- thresholds ----
struct ThresholdsArgs {
    std::string dist;
    int n = 0;
    Output out;
};

int run_thresholds(const ThresholdsArgs& a) {
    if (a.n < 1) throw std::invalid_argument("thresholds: need --n >= 1");
    Distribution dist = load_dist(a.dist);
    auto pol = optimal_thresholds(dist, a.n);
    Output out = a.out;
    out.add(json{{"n", a.n},
                 {"tau", pol.tau},
                 {"g", pol.g},
                 {"benchmark", benchmark_exact(dist, a.n)},
                 {"dist", json::parse(distribution_spec_json(dist))}});
    out.flush();
    return 0;
}

// ------------------------------------------------------------------ ode ----
struct OdeArgs {
    double tol = 1e-4;
    double delta = 1e-5;
    double x_min = 1e-7;
    double step = 1e-5;
    double u_cap = 1e8;
    std::string trace_path;
    Output out;
};

int run_ode(const OdeArgs& a) {
    ShootParams p;
    p.delta = a.delta;
    p.x_min = a.x_min;
    p.step = a.step;
    p.u_cap = a.u_cap;
    auto res = asymptotic_epsilon(a.tol, p);
    Output out = a.out;
    out.add(json{{"epsilon_star", res.eps_star},
                 {"ratio", res.ratio},
                 {"bracket", {res.bracket_lo, res.bracket_hi}},
                 {"steps", res.steps},
                 {"ambiguous_events", res.ambiguous_events},
                 {"tol", a.tol}});
    out.flush();
    if (!a.trace_path.empty()) {
        ShootParams tp = p;
        tp.record_trace = true;
        tp.trace_stride = 100;
        auto r = shoot(res.eps_star, tp);
        std::ofstream f(a.trace_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open trace file: " + a.trace_path);
        f << "x,H,I,u\n";
        for (const auto& t : r.trace)
            f << json(t.x).dump() << "," << json(t.H).dump() << ","
              << json(t.I).dump() << "," << json(t.u).dump() << "\n";
    }
    return 0;
}

// ------------------------------------------------------------ secretary ----
struct SecretaryArgs {
    std::string mode = "theta-star";
    int n = 0;
    double theta = -1.0;
    long long trials = 100000;
    std::uint64_t seed = kDefaultSeed;
    double base = -1.0;
    Output out;
};

int run_secretary(const SecretaryArgs& a) {
    Output out = a.out;
    if (a.mode == "theta-star") {
        auto ts = theta_star();
        out.add(json{{"theta_star", ts.theta}, {"value", ts.value}});
    } else if (a.mode == "simulate") {
        if (a.n < 1) throw std::invalid_argument("secretary simulate: need --n >= 1");
        double theta = a.theta >= 0.0 ? a.theta : theta_star().theta;
        auto inst = SecretaryInstance::rank_instance(a.n);
        auto rep = simulate_stsf(inst, theta, a.trials, a.seed);
        json j{{"mode", a.mode}, {"n", a.n}, {"theta", theta}};
        j.update(report_json(rep));
        j["analytic_bound"] = analytic_bound(std::max(std::floor(theta * a.n), 1.0) / a.n);
        out.add(std::move(j));
    } else if (a.mode == "dp") {
        if (a.n < 1) throw std::invalid_argument("secretary dp: need --n >= 1");
        auto b = dp_upper_bound(a.n);
        auto ts = theta_star();
        out.add(json{{"mode", a.mode},
                     {"n", a.n},
                     {"v1", b.v1},
                     {"ratio", b.ratio},
                     {"tau_star", b.tau_star},
                     {"tau_star_fraction", static_cast<double>(b.tau_star) / a.n},
                     {"analytic_optimum", ts.value}});
    } else if (a.mode == "adversarial") {
        if (a.n < 2) throw std::invalid_argument("secretary adversarial: need --n in [2,20]");
        auto d = adversarial_demo(a.n, a.base);
        out.add(json{{"mode", a.mode},
                     {"n", a.n},
                     {"alg_best_log10", d.alg_best_log10},
                     {"opt_log10", d.opt_log10},
                     {"ratio_bound", d.ratio_bound}});
    } else {
        throw std::invalid_argument("unknown secretary mode: " + a.mode);
    }
    out.flush();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POT/SOT workbench: threshold policies, worst-case ratios, "
                 "asymptotics, and random-order selection"};
    app.require_subcommand(1);

    GammaArgs ga;
    auto* gamma = app.add_subcommand(
        "gamma", "Tight worst-case ratio gamma_n = 1/(1+eps_n) with verification");
    gamma->add_option("--n", ga.n, "Horizon n");
    gamma->add_option("--n-range", ga.n_range, "Sweep n over A..B");
    gamma->add_option("--tol", ga.tol, "Bisection tolerance")->capture_default_str();
    gamma->add_option("--verify-tol", ga.verify_tol, "Worst-case verification tolerance")
        ->capture_default_str();
    gamma->add_option("--eta", ga.eta, "Tail extension ratio")->capture_default_str();
    add_output_flags(gamma, ga.out);

    BoundsArgs ba;
    auto* bounds = app.add_subcommand(
        "bounds", "Threshold-policy guarantees (single/two/equidistant/key/hard-limits)");
    bounds->add_option("--kind", ba.kind, "single | two | equidistant | key | hard-limits")
        ->capture_default_str();
    bounds->add_option("--n", ba.n, "Horizon (0 = asymptotic where applicable)");
    bounds->add_option("--alpha", ba.alpha, "Scaled quantile (or beta for hard-limits)")
        ->capture_default_str();
    bounds->add_option("--alphas", ba.alphas, "Scaled quantiles, decreasing")
        ->delimiter(',');
    bounds->add_option("--theta", ba.theta, "First-block fraction (kind two)")
        ->capture_default_str();
    bounds->add_option("--quantiles", ba.quantiles, "Schedule quantiles (kind key)")
        ->delimiter(',');
    bounds->add_option("--lengths", ba.lengths, "Schedule block lengths (kind key)")
        ->delimiter(',');
    bounds->add_flag("--optimize", ba.optimize, "Maximize the bound over parameters");
    bounds->add_option("--restarts", ba.restarts, "Optimizer restarts")
        ->capture_default_str();
    bounds->add_option("--k", ba.k, "Number of blocks (equidistant optimize)")
        ->capture_default_str();
    bounds->add_option("--seed", ba.seed, "Optimizer seed")->capture_default_str();
    bounds->add_option("--alpha-range", ba.alpha_range, "Sweep alpha over A..B");
    bounds->add_option("--alpha-steps", ba.alpha_steps, "Sweep step count");
    add_output_flags(bounds, ba.out);

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo policy evaluation");
    simulate->add_option("--dist", sa.dist, "Distribution spec (path or inline JSON)")
        ->required();
    simulate->add_option("--n", sa.n, "Horizon n")->required();
    simulate->add_option("--policy", sa.policy, "optimal | schedule")
        ->capture_default_str();
    simulate->add_option("--quantiles", sa.quantiles, "Schedule quantiles")
        ->delimiter(',');
    simulate->add_option("--lengths", sa.lengths, "Schedule block lengths")
        ->delimiter(',');
    simulate->add_option("--trials", sa.trials, "Trial count")->capture_default_str();
    simulate->add_option("--seed", sa.seed, "Simulation seed")->capture_default_str();
    add_output_flags(simulate, sa.out);

    ThresholdsArgs ta;
    auto* thresholds =
        app.add_subcommand("thresholds", "Optimal-policy thresholds and benchmark");
    thresholds->add_option("--dist", ta.dist, "Distribution spec (path or inline JSON)")
        ->required();
    thresholds->add_option("--n", ta.n, "Horizon n")->required();
    add_output_flags(thresholds, ta.out);

    OdeArgs oa;
    auto* ode = app.add_subcommand("ode", "Asymptotic ratio via the shooting method");
    ode->add_option("--tol", oa.tol, "Bisection tolerance on eps")->capture_default_str();
    ode->add_option("--delta", oa.delta, "Series start offset")->capture_default_str();
    ode->add_option("--x-min", oa.x_min, "Left integration stop")->capture_default_str();
    ode->add_option("--step", oa.step, "RK4 base step")->capture_default_str();
    ode->add_option("--u-cap", oa.u_cap, "Blow-up cap for u")->capture_default_str();
    ode->add_option("--trace", oa.trace_path, "Write a trajectory trace CSV");
    add_output_flags(ode, oa.out);

    SecretaryArgs se;
    auto* secretary = app.add_subcommand("secretary", "Random-order selection over time");
    secretary->add_option("--mode", se.mode, "simulate | dp | theta-star | adversarial")
        ->capture_default_str();
    secretary->add_option("--n", se.n, "Instance size");
    secretary->add_option("--theta", se.theta, "Sampling fraction (default theta*)");
    secretary->add_option("--trials", se.trials, "Trial count")->capture_default_str();
    secretary->add_option("--seed", se.seed, "Simulation seed")->capture_default_str();
    secretary->add_option("--base", se.base, "Adversarial value base c (default n)");
    add_output_flags(secretary, se.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gamma->parsed()) return run_gamma(ga);
        if (bounds->parsed()) return run_bounds(ba);
        if (simulate->parsed()) return run_simulate(sa);
        if (thresholds->parsed()) return run_thresholds(ta);
        if (ode->parsed()) return run_ode(oa);
        if (secretary->parsed()) return run_secretary(se);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
