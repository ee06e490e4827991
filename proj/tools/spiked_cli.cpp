// spiked: tabulate limit laws, sample the spiked Wishart ensemble and its
// last-passage equivalents, run the acceptance suites, emit phase diagrams.
//
// Exit codes: 0 success, 1 a verification suite failed, 2 usage or
// validation error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spiked/distributions/table.hpp"
#include "spiked/error.hpp"
#include "spiked/experiments/experiment.hpp"
#include "spiked/experiments/phase.hpp"
#include "spiked/io/table_io.hpp"
#include "spiked/verify/suites.hpp"
#include "spiked/version.hpp"

namespace {

using namespace spiked;
namespace fs = std::filesystem;

constexpr const char* kSamplesSchema = "spiked.samples.v1";
constexpr const char* kPhaseSchema = "spiked.phase.v1";
constexpr const char* kVerifySchema = "spiked.verify.v1";

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw precondition_error(std::string(flag) + ": cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

void write_json(const nlohmann::json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

struct ModelArgs {
    int M = 100;
    int N = 100;
    std::string spikes;

    void add(CLI::App* app) {
        app->add_option("--M", M, "sample count M")->capture_default_str();
        app->add_option("--N", N, "dimension N")->capture_default_str();
        app->add_option("--spikes", spikes, "comma-separated spikes l_1,...,l_r (default none)");
    }

    SpikedModel model() const {
        SpikedModel m{M, N, parse_list(spikes, "--spikes")};
        m.validate();
        return m;
    }
};

struct TabulateArgs {
    std::string law = "F0";
    int k = 1;
    std::string w;
    ModelArgs model;
    double x_min = std::nan("");
    double x_max = std::nan("");
    int points = 201;
    int grid = 64;
    std::string output = "table.csv";
    std::string format = "csv";
};

LawSpec tabulate_law(const TabulateArgs& a) {
    switch (parse_law_kind(a.law)) {
        case LawKind::F0: return LawSpec::f0();
        case LawKind::F1: return LawSpec::f1();
        case LawKind::Fk: return LawSpec::fk(a.k);
        case LawKind::FkInterp: {
            auto w = parse_list(a.w, "--w");
            require(static_cast<int>(w.size()) == a.k,
                    "--w: expected " + std::to_string(a.k) + " values for --k " + std::to_string(a.k));
            return LawSpec::fk_interp(std::move(w));
        }
        case LawKind::Gk: return LawSpec::gk(a.k);
        case LawKind::FiniteMN: return LawSpec::finite_mn(a.model.model());
    }
    throw precondition_error("unknown law");
}

int cmd_tabulate(const TabulateArgs& a, bool quick, int threads) {
    const LawSpec law = tabulate_law(a);
    law.validate();
    auto [lo, hi] = law.default_window();
    if (!std::isnan(a.x_min)) lo = a.x_min;
    if (!std::isnan(a.x_max)) hi = a.x_max;
    require(a.points >= 2, "--points must be >= 2");
    require(lo < hi, "--x-min must be below --x-max");
    require(a.grid >= 8, "--grid must be >= 8");
    require(a.format == "csv" || a.format == "json", "--format must be csv or json");
    const int grid = quick ? std::max(8, a.grid / 2) : a.grid;
    const auto table = DistributionTable::build(law, DistributionTable::linspace(lo, hi, a.points), grid, threads);
    if (a.format == "csv")
        io::write_table_csv(table, a.output);
    else
        io::write_table_json(table, a.output);
    return 0;
}

struct SampleArgs {
    std::string sampler = "wishart";
    ModelArgs model;
    int trials = 1000;
    std::uint64_t seed = 1;
    double window_threshold = 0.5;
    std::string output = "samples.csv";
    std::string format = "csv";
};

int cmd_sample(const SampleArgs& a, bool quick, int threads) {
    const SamplerKind sampler = parse_sampler(a.sampler);
    const SpikedModel model = a.model.model();
    require(a.trials >= 1, "--trials must be >= 1");
    require(a.format == "csv" || a.format == "json", "--format must be csv or json");
    require(sampler != SamplerKind::Wishart || model.M >= model.N, "--sampler wishart needs M >= N");
    const int trials = quick ? std::max(1, a.trials / 2) : a.trials;

    Report r;
    r.raw = draw_many(sampler, model, trials, a.seed, threads);
    nlohmann::json meta = {{"schema", kSamplesSchema}, {"version", kVersion},     {"sampler", sampler_name(sampler)},
                           {"model", io::model_to_json(model)}, {"seed", a.seed}, {"trials", trials},
                           {"columns", {"trial", "raw"}}};
    if (model.M >= model.N) {
        const PhaseRegime regime = phase_classify(model, a.window_threshold);
        for (double l : r.raw) r.scaled.push_back(scale_sample(l, model, regime).scaled_x);
        meta["columns"] = {"trial", "raw", "scaled"};
        meta["scaling"] = {{"regime", regime_name(regime.regime)},      {"law", regime.predicted_law.label()},
                           {"center", regime.center},                   {"scale", regime.scale},
                           {"exponent", regime.exponent},               {"window_threshold", a.window_threshold}};
    }
    if (a.format == "csv") {
        write_samples_csv(r, a.output);
        write_json(meta, io::sidecar_path(a.output));
    } else {
        meta["raw"] = r.raw;
        if (!r.scaled.empty()) meta["scaled"] = r.scaled;
        write_json(meta, a.output);
    }
    return 0;
}

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = verify::kDefaultSeed;
    int trials = 0;
    std::string output;
};

int cmd_verify(const VerifyArgs& a, bool quick, int threads) {
    require(verify::is_suite_id(a.suite), "--suite: unknown suite '" + a.suite + "'");
    require(a.trials >= 0, "--trials must be >= 0");
    verify::SuiteOptions o;
    o.quick = quick;
    o.seed = a.seed;
    o.trials = a.trials;
    o.threads = threads;
    bool all = true;
    nlohmann::json suites = nlohmann::json::array();
    for (const auto& r : verify::run_suites(a.suite, o, [](const verify::SuiteResult& r) {
             std::cout << r.line() << std::endl;
         })) {
        all = all && r.pass;
        suites.push_back(r.to_json());
    }
    if (!a.output.empty())
        write_json({{"schema", kVerifySchema},
                    {"version", kVersion},
                    {"thresholds", verify::kThresholdsVersion},
                    {"seed", a.seed},
                    {"quick", quick},
                    {"pass", all},
                    {"suites", suites}},
                   a.output);
    return all ? 0 : 1;
}

struct PhaseArgs {
    int M = 1000;
    double gamma = 1.0;
    double l_min = 0.5;
    double l_max = 4.0;
    int cells = 36;
    double window_threshold = 0.5;
    std::string output = "phase.csv";
};

int cmd_phase_diagram(const PhaseArgs& a) {
    require(a.gamma >= 1.0 && std::isfinite(a.gamma), "--gamma must be >= 1");
    require(a.M >= 1, "--M must be >= 1");
    require(a.l_min > 0.0 && a.l_max > a.l_min, "--l-min and --l-max must satisfy 0 < l-min < l-max");
    require(a.cells >= 2, "--cells must be >= 2");
    require(a.window_threshold >= 0.0, "--window-threshold must be >= 0");
    const int N = static_cast<int>(std::lround(a.M / (a.gamma * a.gamma)));
    require(N >= 2, "--M and --gamma leave fewer than 2 variables");
    const auto ls = DistributionTable::linspace(a.l_min, a.l_max, a.cells);

    std::ofstream out(a.output);
    if (!out) throw std::runtime_error("cannot open " + a.output + " for writing");
    out << "l1,l2,regime,k,law,center,scale,exponent\n";
    for (double l1 : ls)
        for (double l2 : ls) {
            const PhaseRegime r = phase_classify({a.M, N, {l1, l2}}, a.window_threshold);
            out << io::format_double(l1) << ',' << io::format_double(l2) << ',' << regime_name(r.regime) << ','
                << r.k << ',' << r.predicted_law.label() << ',' << io::format_double(r.center) << ','
                << io::format_double(r.scale) << ',' << io::format_double(r.exponent) << '\n';
        }
    const SpikedModel probe{a.M, N, {}};
    write_json({{"schema", kPhaseSchema},
                {"version", kVersion},
                {"M", a.M},
                {"N", N},
                {"gamma", probe.gamma()},
                {"critical_value", 1.0 + 1.0 / probe.gamma()},
                {"critical_half_width", critical_window(probe, a.window_threshold)},
                {"window_threshold", a.window_threshold},
                {"cells", a.cells},
                {"columns", {"l1", "l2", "regime", "k", "law", "center", "scale", "exponent"}}},
               io::sidecar_path(a.output));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Largest-eigenvalue laws of spiked complex Wishart matrices"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    bool quick = false;
    int threads = default_thread_count();
    app.add_flag("--quick", quick, "halve grid sizes and trial counts");
    app.add_option("--threads", threads, "worker threads (default: SPIKED_THREADS or all cores)");

    TabulateArgs tab;
    auto* t = app.add_subcommand("tabulate", "tabulate a CDF to CSV (+ JSON sidecar) or JSON");
    t->add_option("--law", tab.law, "F0, F1, Fk, FkInterp, Gk or FiniteMN")->required();
    t->add_option("--k", tab.k, "order k for Fk, FkInterp, Gk")->capture_default_str();
    t->add_option("--w", tab.w, "comma-separated w_1..w_k for FkInterp");
    tab.model.add(t);
    t->add_option("--x-min", tab.x_min, "left end of the abscissa range (default: law window)");
    t->add_option("--x-max", tab.x_max, "right end of the abscissa range (default: law window)");
    t->add_option("--points", tab.points, "number of abscissae")->capture_default_str();
    t->add_option("--grid", tab.grid, "quadrature nodes before refinement")->capture_default_str();
    t->add_option("-o,--output", tab.output, "output path")->capture_default_str();
    t->add_option("--format", tab.format, "csv or json")->capture_default_str();

    SampleArgs smp;
    auto* s = app.add_subcommand("sample", "draw lambda_1 (or last-passage / exit times) to CSV");
    s->add_option("--sampler", smp.sampler, "wishart, lpp or queue")->capture_default_str();
    smp.model.add(s);
    s->add_option("--trials", smp.trials, "number of draws")->capture_default_str();
    s->add_option("--seed", smp.seed, "base seed; draw t uses stream (seed, t)")->capture_default_str();
    s->add_option("--window-threshold", smp.window_threshold, "critical window constant")->capture_default_str();
    s->add_option("-o,--output", smp.output, "output path")->capture_default_str();
    s->add_option("--format", smp.format, "csv or json")->capture_default_str();

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "run acceptance suites; exit 0 iff all pass");
    v->add_option("--suite", ver.suite, "suite id or all")->capture_default_str();
    v->add_option("--seed", ver.seed, "seed of the Monte Carlo suites")->capture_default_str();
    v->add_option("--trials", ver.trials, "override trial counts of Monte Carlo suites");
    v->add_option("-o,--output", ver.output, "JSON report path");

    PhaseArgs ph;
    auto* p = app.add_subcommand("phase-diagram", "classify a (l1, l2) grid at fixed gamma");
    p->add_option("--M", ph.M, "sample count M")->capture_default_str();
    p->add_option("--gamma", ph.gamma, "gamma = sqrt(M/N) >= 1")->capture_default_str();
    p->add_option("--l-min", ph.l_min, "smallest spike on each axis")->capture_default_str();
    p->add_option("--l-max", ph.l_max, "largest spike on each axis")->capture_default_str();
    p->add_option("--cells", ph.cells, "grid points per axis")->capture_default_str();
    p->add_option("--window-threshold", ph.window_threshold, "critical window constant")->capture_default_str();
    p->add_option("-o,--output", ph.output, "output CSV path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (threads < 1) throw precondition_error("--threads must be >= 1");
        if (*t) return cmd_tabulate(tab, quick, threads);
        if (*s) return cmd_sample(smp, quick, threads);
        if (*v) return cmd_verify(ver, quick, threads);
        if (*p) return cmd_phase_diagram(ph);
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
