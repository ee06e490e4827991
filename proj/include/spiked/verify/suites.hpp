#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiked/distributions/laws.hpp"
#include "spiked/distributions/table.hpp"
#include "spiked/error.hpp"
#include "spiked/experiments/ecdf.hpp"
#include "spiked/experiments/experiment.hpp"
#include "spiked/experiments/phase.hpp"
#include "spiked/verify/oracles.hpp"

namespace spiked::verify {

/// Version tag of the calibrated thresholds below; bump whenever one changes.
inline constexpr const char* kThresholdsVersion = "thresholds.v1";
inline constexpr std::uint64_t kDefaultSeed = 20240601;

inline constexpr double kKsBbpNull = 0.08;
inline constexpr double kKsBbpSupercritical = 0.06;
inline constexpr double kKsBbpCritical = 0.08;
inline constexpr double kKsFiniteN = 0.05;
inline constexpr double kKsFiniteMc = 0.01;

struct SuiteOptions {
    bool quick = false;
    std::uint64_t seed = kDefaultSeed;
    /// Overrides the trial count of the Monte Carlo suites when positive.
    int trials = 0;
    int threads = default_thread_count();
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    int number = 0;
    std::string id;
    bool pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::vector<Check> checks;
    std::string error;

    /// One line: status, id, the failing or summarised checks, timing.
    std::string line() const {
        std::string s = std::string(pass ? "[PASS] " : "[FAIL] ") + std::to_string(number) + " " + id + ":";
        for (const auto& c : checks) s += " " + c.name + (c.pass ? " ok" : " FAILED") + " (" + c.detail + ");";
        if (!error.empty()) s += " error: " + error + ";";
        char buf[96];
        std::snprintf(buf, sizeof buf, " %.1f s (budget %.0f s)", seconds, budget_seconds);
        return s + buf;
    }

    nlohmann::json to_json() const {
        nlohmann::json checks_json = nlohmann::json::array();
        for (const auto& c : checks) checks_json.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        nlohmann::json j = {{"id", id},           {"number", number}, {"pass", pass}, {"seconds", seconds},
                            {"budget_seconds", budget_seconds}, {"checks", checks_json}};
        if (!error.empty()) j["error"] = error;
        return j;
    }
};

namespace detail {

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline Check bound_check(std::string name, double value, double bound, const std::string& what = "max |diff|") {
    return {std::move(name), value <= bound, what + " = " + sci(value) + " <= " + sci(bound)};
}

inline std::vector<double> points(double a, double b, int n) { return DistributionTable::linspace(a, b, n); }

inline int trials_for(const SuiteOptions& o, int full) {
    if (o.trials > 0) return o.trials;
    return o.quick ? full / 2 : full;
}

inline int grid_for(const SuiteOptions& o) { return o.quick ? 32 : 64; }

template <class F, class G>
double max_diff(const std::vector<double>& xs, F&& f, G&& g) {
    double d = 0.0;
    for (double x : xs) d = std::max(d, std::abs(f(x) - g(x)));
    return d;
}

inline std::vector<Check> two_route_f0(const SuiteOptions& o) {
    const int n = grid_for(o);
    const double d =
        max_diff(points(-8.0, 4.0, 25), [&](double x) { return f_gue(x, n); }, [](double x) { return f_gue_painleve(x); });
    return {bound_check("fredholm-vs-painleve", d, 1e-6)};
}

inline std::vector<Check> two_route_f1(const SuiteOptions& o) {
    const int n = grid_for(o);
    const double d =
        max_diff(points(-6.0, 3.0, 10), [&](double x) { return f_k(x, 1, n); }, [](double x) { return f1_painleve(x); });
    return {bound_check("rank-one-vs-painleve", d, 1e-6)};
}

inline std::vector<Check> gk_oracle(const SuiteOptions& o) {
    const int n = grid_for(o);
    const auto xs = points(-2.0, 4.0, 10);
    std::vector<Check> out;
    for (int k = 1; k <= 3; ++k) {
        const double d = max_diff(xs, [&](double x) { return g_k(x, k, n); },
                                  [&](double x) { return oracle::gk_tensor(x, k); });
        out.push_back(bound_check("G" + std::to_string(k) + "-vs-quadrature", d, 1e-6));
    }
    const double d1 =
        max_diff(xs, [&](double x) { return g_k(x, 1, n); }, [](double x) { return oracle::normal_cdf(x); });
    out.push_back(bound_check("G1-vs-normal", d1, 1e-8));
    return out;
}

inline std::vector<Check> finite_mn_exact(const SuiteOptions&) {
    std::vector<Check> out;
    const auto xs = points(0.05, 4.0, 12);
    const SpikedModel m11{1, 1, {}};
    const SpikedModel m51{5, 1, {}};
    out.push_back(bound_check("(1,1)-vs-exponential",
                              max_diff(xs, [&](double x) { return finite_cdf(m11, x); },
                                       [](double x) { return oracle::gamma_cdf(1.0, 1.0, x); }),
                              1e-8));
    out.push_back(bound_check("(5,1)-vs-gamma",
                              max_diff(xs, [&](double x) { return finite_cdf(m51, x); },
                                       [](double x) { return oracle::gamma_cdf(5.0, 5.0, x); }),
                              1e-8));
    const SpikedModel spiked{8, 4, {2.0}};
    const FiniteKernelConfig base = FiniteKernelConfig::defaults(spiked);
    double dq = 0.0;
    for (double x : {1.0, 2.5, 4.0, 6.0}) {
        const double ref = finite_mn_det(base, x);
        for (double q : {0.15, 0.35}) dq = std::max(dq, std::abs(finite_mn_det(base.with_q(q), x) - ref));
    }
    out.push_back(bound_check("q-invariance", dq, 1e-8));
    return out;
}

inline std::vector<Check> finite_mn_vs_mc(const SuiteOptions& o) {
    const SpikedModel model{8, 4, {}};
    const int trials = trials_for(o, 100000);
    const auto draws = draw_many(SamplerKind::Wishart, model, trials, o.seed, o.threads);
    const auto table = DistributionTable::build(LawSpec::finite_mn(model), points(0.02, 8.0, o.quick ? 161 : 321),
                                                64, o.threads);
    const double ks = ks_distance(draws, [&](double x) { return table.cdf(x); });
    return {bound_check("sup|exact-ECDF| n=" + std::to_string(trials), ks, kKsFiniteMc, "KS")};
}

inline std::vector<Check> interp_consistency(const SuiteOptions& o) {
    const int n = grid_for(o);
    std::vector<Check> out;
    const std::vector<double> xs = {-3.0, -1.0, 1.0};
    for (int k = 1; k <= 2; ++k) {
        const std::vector<double> zero(static_cast<std::size_t>(k), 0.0);
        out.push_back(bound_check("w=0-vs-F" + std::to_string(k),
                                  max_diff(xs, [&](double x) { return f_k_interp(x, k, zero, n); },
                                           [&](double x) { return f_k(x, k, n); }),
                                  1e-6));
    }
    const std::vector<double> w3 = {0.5, -0.3, 1.2};
    const std::vector<std::vector<double>> perms = {{-0.3, 1.2, 0.5}, {1.2, 0.5, -0.3}};
    double dp = 0.0;
    for (double x : {-2.0, 0.5}) {
        const double ref = f_k_interp(x, 3, w3, n);
        for (const auto& p : perms) dp = std::max(dp, std::abs(f_k_interp(x, 3, p, n) - ref));
    }
    out.push_back(bound_check("permutation", dp, 1e-6));
    const std::vector<double> large = {8.0};
    double dl = 0.0;
    std::string at;
    for (double x : {-2.0, 0.0, 2.0}) {
        const double d = std::abs(f_k_interp(x, 1, large, n) - f_gue(x, n));
        at += (at.empty() ? "" : ",") + sci(d);
        dl = std::max(dl, d);
    }
    out.push_back({"w=8-vs-F0", dl <= 5e-3, "|diff| at x=-2,0,2: " + at + " vs 0.005"});
    return out;
}

inline std::vector<Check> experiment_check(const SuiteOptions& o, ExperimentMode mode, SpikedModel model,
                                           double threshold, const std::string& expected_law) {
    ExperimentConfig c;
    c.mode = mode;
    c.model = std::move(model);
    c.trials = trials_for(o, 5000);
    c.seed = o.seed;
    c.threshold = threshold;
    c.threads = o.threads;
    const Report r = run_experiment(c);
    return {{"law", r.law == expected_law, r.law + " expected " + expected_law},
            bound_check("KS vs " + r.law + " n=" + std::to_string(r.trials), r.ks, threshold, "KS")};
}

inline std::vector<Check> lpp_equivalence(const SuiteOptions& o) {
    std::vector<Check> out;
    for (const SpikedModel& m : {SpikedModel{8, 4, {}}, SpikedModel{50, 50, {3.0}}}) {
        ExperimentConfig c;
        c.mode = ExperimentMode::LppEquivalence;
        c.model = m;
        c.trials = trials_for(o, 10000);
        c.seed = o.seed;
        c.threads = o.threads;
        const Report r = run_experiment(c);
        out.push_back(bound_check("wishart-vs-lpp " + describe(m), r.ks, r.threshold, "KS"));
    }
    int mismatches = 0;
    int compared = 0;
    for (const SpikedModel& m : {SpikedModel{8, 4, {}}, SpikedModel{50, 50, {3.0}}, SpikedModel{3, 7, {2.0, 0.5}}})
        for (std::uint64_t t = 0; t < 200; ++t) {
            RngStream a(o.seed, t);
            RngStream b(o.seed, t);
            mismatches += lpp_last_passage(m, a) != queue_exit_time(m, b);
            ++compared;
        }
    out.push_back({"queue-bit-identical", mismatches == 0,
                   std::to_string(mismatches) + " mismatches in " + std::to_string(compared) + " draws"});
    return out;
}

inline double mean_dwell(const SpikedModel& m, int draws, std::uint64_t seed) {
    double sum = 0.0;
    for (int t = 0; t < draws; ++t) {
        RngStream rng(seed, static_cast<std::uint64_t>(t));
        sum += lpp_column_dwell(m, rng);
    }
    return sum / draws;
}

inline std::vector<Check> dwell_heuristic(const SuiteOptions& o) {
    const int draws = trials_for(o, 500);
    const double gamma = 1.0;
    const double l1 = 4.0;
    const double target = 1.0 - 1.0 / (gamma * gamma * (l1 - 1.0) * (l1 - 1.0));
    const double sup = mean_dwell({200, 200, {l1}}, draws, o.seed);
    const double sub = mean_dwell({200, 200, {1.5}}, draws, o.seed);
    return {bound_check("supercritical mean " + sci(sup) + " vs " + sci(target), std::abs(sup - target), 0.05,
                        "|diff|"),
            bound_check("subcritical mean", sub, 0.05, "mean")};
}

/// Monotone, bounded and near 0 / 1 at the ends of the default window.
inline Check evaluator_check(const LawSpec& law, int points_count, int grid, int threads) {
    const auto [lo, hi] = law.default_window();
    const auto table = DistributionTable::build(law, points(lo, hi, points_count), grid, threads);
    const auto& v = table.values();
    double worst_drop = 0.0;
    double worst_range = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        worst_range = std::max({worst_range, -v[i], v[i] - 1.0});
        if (i > 0) worst_drop = std::max(worst_drop, v[i - 1] - v[i]);
    }
    const bool ends = v.front() <= 1e-6 && v.back() >= 1.0 - 1e-6;
    const bool ok = worst_drop <= law.accuracy() && worst_range <= 1e-6 && ends;
    return {law.label() + " shape", ok,
            "drop " + sci(worst_drop) + ", excess " + sci(worst_range) + ", F(lo) " + sci(v.front()) +
                ", 1-F(hi) " + sci(1.0 - v.back())};
}

inline std::vector<Check> property_suite(const SuiteOptions& o) {
    std::vector<Check> out;
    const int n = grid_for(o);
    const int pts = o.quick ? 21 : 41;
    for (const LawSpec& law :
         {LawSpec::f0(), LawSpec::f1(), LawSpec::fk(2), LawSpec::fk_interp({0.5, -0.3}), LawSpec::gk(1),
          LawSpec::gk(2), LawSpec::gk(5), LawSpec::finite_mn({8, 4, {2.0}})})
        out.push_back(evaluator_check(law, pts, n, o.threads));

    double conv = 0.0;
    for (double x : {-6.0, -3.0, -1.0, 0.0, 2.0}) {
        conv = std::max(conv, std::abs(f_gue(x, 64, false) - f_gue(x, 128, false)));
        conv = std::max(conv, std::abs(f_k(x, 2, 64, false) - f_k(x, 2, 128, false)));
    }
    for (double x : {-2.0, 0.0, 2.0}) conv = std::max(conv, std::abs(g_k(x, 3, 64, false) - g_k(x, 3, 128, false)));
    out.push_back(bound_check("grid-doubling", conv, 1e-8));

    out.push_back(bound_check("painleve-residual", default_hastings_mcleod().max_interior_residual(), 1e-8,
                              "max residual"));

    const SpikedModel m{30, 20, {2.5}};
    bool same = true;
    for (SamplerKind s : {SamplerKind::Wishart, SamplerKind::Lpp, SamplerKind::Queue})
        same = same && draw_many(s, m, 64, o.seed, 1) == draw_many(s, m, 64, o.seed, std::max(2, o.threads));
    ExperimentConfig c;
    c.model = {40, 40, {}};
    c.trials = 200;
    c.seed = o.seed;
    c.threshold = 1.0;
    c.table_points = 41;
    const bool report_same = run_experiment(c).to_json().dump() == run_experiment(c).to_json().dump();
    out.push_back({"determinism", same && report_same,
                   std::string("samplers across thread counts ") + (same ? "equal" : "differ") + ", reports " +
                       (report_same ? "equal" : "differ")});
    return out;
}

struct SuiteDef {
    const char* id;
    double budget_seconds;
    std::function<std::vector<Check>(const SuiteOptions&)> run;
};

inline const std::vector<SuiteDef>& registry() {
    static const std::vector<SuiteDef> defs = {
        {"two-route-f0", 30, two_route_f0},
        {"two-route-f1", 60, two_route_f1},
        {"gk-oracle", 60, gk_oracle},
        {"finite-mn-exact", 30, finite_mn_exact},
        {"finite-mn-vs-mc", 300, finite_mn_vs_mc},
        {"interp-consistency", 300, interp_consistency},
        {"bbp-null", 300,
         [](const SuiteOptions& o) {
             return experiment_check(o, ExperimentMode::Theorem, {100, 100, {}}, kKsBbpNull, "F0");
         }},
        {"bbp-supercritical", 300,
         [](const SuiteOptions& o) {
             return experiment_check(o, ExperimentMode::Theorem, {100, 100, {4.0}}, kKsBbpSupercritical, "G1");
         }},
        {"bbp-critical", 600,
         [](const SuiteOptions& o) {
             return experiment_check(o, ExperimentMode::Theorem, {200, 200, {2.0}}, kKsBbpCritical, "F1");
         }},
        {"finite-n-gk", 300,
         [](const SuiteOptions& o) {
             return experiment_check(o, ExperimentMode::FiniteN, {2000, 2, {1.0, 1.0}}, kKsFiniteN, "G2");
         }},
        {"lpp-equivalence", 600, lpp_equivalence},
        {"dwell-heuristic", 300, dwell_heuristic},
        {"property-suite", 600, property_suite},
    };
    return defs;
}

}  // namespace detail

inline std::vector<std::string> suite_ids() {
    std::vector<std::string> ids;
    for (const auto& d : detail::registry()) ids.push_back(d.id);
    return ids;
}

inline bool is_suite_id(const std::string& id) {
    if (id == "all") return true;
    const auto ids = suite_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

/// Runs one suite; library errors are caught and reported as a failure.
inline SuiteResult run_suite(const std::string& id, const SuiteOptions& options) {
    const auto& defs = detail::registry();
    const auto it = std::find_if(defs.begin(), defs.end(), [&](const auto& d) { return id == d.id; });
    if (it == defs.end()) throw precondition_error("unknown suite '" + id + "'; expected one of the criterion ids or all");
    SuiteResult r;
    r.number = static_cast<int>(it - defs.begin()) + 1;
    r.id = id;
    r.budget_seconds = it->budget_seconds;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.checks = it->run(options);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = r.error.empty() && !r.checks.empty() && r.seconds <= r.budget_seconds &&
             std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
    return r;
}

/// Runs the named suite, or every suite for "all", calling `report` after each.
inline std::vector<SuiteResult> run_suites(const std::string& id, const SuiteOptions& options,
                                           const std::function<void(const SuiteResult&)>& report = {}) {
    require(is_suite_id(id), "unknown suite '" + id + "'");
    std::vector<SuiteResult> out;
    for (const auto& name : id == "all" ? suite_ids() : std::vector<std::string>{id}) {
        out.push_back(run_suite(name, options));
        if (report) report(out.back());
    }
    return out;
}

}  // namespace spiked::verify
