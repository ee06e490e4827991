#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiked/distributions/table.hpp"
#include "spiked/ensembles/model.hpp"
#include "spiked/ensembles/rng.hpp"
#include "spiked/ensembles/samplers.hpp"
#include "spiked/error.hpp"
#include "spiked/experiments/ecdf.hpp"
#include "spiked/experiments/phase.hpp"
#include "spiked/io/table_io.hpp"
#include "spiked/parallel.hpp"
#include "spiked/version.hpp"

namespace spiked {

enum class ExperimentMode { Theorem, FiniteN, LppEquivalence };
enum class SamplerKind { Wishart, Lpp, Queue };

inline std::string mode_name(ExperimentMode m) {
    switch (m) {
        case ExperimentMode::Theorem: return "theorem";
        case ExperimentMode::FiniteN: return "finite-n";
        case ExperimentMode::LppEquivalence: return "lpp-equivalence";
    }
    return "?";
}

inline std::string sampler_name(SamplerKind s) {
    switch (s) {
        case SamplerKind::Wishart: return "wishart";
        case SamplerKind::Lpp: return "lpp";
        case SamplerKind::Queue: return "queue";
    }
    return "?";
}

inline SamplerKind parse_sampler(const std::string& name) {
    for (SamplerKind s : {SamplerKind::Wishart, SamplerKind::Lpp, SamplerKind::Queue})
        if (sampler_name(s) == name) return s;
    throw precondition_error("sampler must be one of wishart, lpp, queue; got '" + name + "'");
}

inline ExperimentMode parse_mode(const std::string& name) {
    for (ExperimentMode m : {ExperimentMode::Theorem, ExperimentMode::FiniteN, ExperimentMode::LppEquivalence})
        if (mode_name(m) == name) return m;
    throw precondition_error("mode must be one of theorem, finite-n, lpp-equivalence; got '" + name + "'");
}

/// Stream ids at or above this offset feed the second sampler of a two-sample run.
inline constexpr std::uint64_t kSecondSamplerStream = std::uint64_t{1} << 40;

inline double draw_lambda1(SamplerKind sampler, const SpikedModel& model, RngStream& rng) {
    switch (sampler) {
        case SamplerKind::Wishart: return sample_largest_eigenvalue(model, rng);
        case SamplerKind::Lpp: return lpp_last_passage(model, rng);
        case SamplerKind::Queue: return queue_exit_time(model, rng);
    }
    return 0.0;
}

/// One draw per trial on stream (seed, stream_offset + trial); the result does
/// not depend on the thread count.
inline std::vector<double> draw_many(SamplerKind sampler, const SpikedModel& model, int trials, std::uint64_t seed,
                                     int threads, std::uint64_t stream_offset = 0) {
    std::vector<double> out(static_cast<std::size_t>(trials));
    parallel_for(out.size(), threads, [&](std::size_t t) {
        RngStream rng(seed, stream_offset + t);
        out[t] = draw_lambda1(sampler, model, rng);
    });
    return out;
}

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::Theorem;
    SamplerKind sampler = SamplerKind::Wishart;
    SpikedModel model;
    int trials = 1000;
    std::uint64_t seed = 1;
    /// Pass threshold on the KS statistic; NaN selects the mode default.
    double threshold = std::numeric_limits<double>::quiet_NaN();
    /// "auto" or a descriptor such as F1 / G2.
    std::string target_law = "auto";
    double window_threshold = 0.5;
    int table_points = 201;
    int threads = default_thread_count();
    bool include_timing = false;

    /// All violated constraints, each prefixed by its field path.
    std::vector<std::string> problems() const {
        std::vector<std::string> p;
        if (model.M < 1) p.push_back("config.model.M: must be >= 1");
        if (model.N < 1) p.push_back("config.model.N: must be >= 1");
        if (model.rank() > model.N) p.push_back("config.model.spikes: more spikes than N");
        for (std::size_t j = 0; j < model.spikes.size(); ++j)
            if (!(model.spikes[j] > 0.0) || !std::isfinite(model.spikes[j]))
                p.push_back("config.model.spikes[" + std::to_string(j) + "]: must be positive and finite");
        if (trials < 1) p.push_back("config.trials: must be >= 1");
        if (table_points < 4) p.push_back("config.table_points: must be >= 4");
        if (threads < 1) p.push_back("config.threads: must be >= 1");
        if (!(window_threshold >= 0.0)) p.push_back("config.window_threshold: must be >= 0");
        if (!std::isnan(threshold) && !(threshold > 0.0)) p.push_back("config.threshold: must be positive");
        if ((mode != ExperimentMode::LppEquivalence || sampler == SamplerKind::Wishart) && model.M < model.N)
            p.push_back("config.model: Wishart sampling needs M >= N");
        if (mode == ExperimentMode::Theorem && std::isnan(threshold))
            p.push_back("config.threshold: required in theorem mode");
        if (mode == ExperimentMode::FiniteN) {
            if (std::isnan(threshold)) p.push_back("config.threshold: required in finite-n mode");
            for (int i = 1; i < model.N && model.N >= 1; ++i)
                if (model.population(i) != model.population(0)) {
                    p.push_back("config.model.spikes: finite-n mode needs equal population eigenvalues");
                    break;
                }
        }
        if (target_law != "auto") {
            try {
                parse_law_descriptor(target_law);
            } catch (const precondition_error& e) {
                p.push_back(std::string("config.target_law: ") + e.what());
            }
        }
        return p;
    }

    void validate() const {
        const auto p = problems();
        if (p.empty()) return;
        std::string msg;
        for (const auto& s : p) msg += (msg.empty() ? "" : "; ") + s;
        throw precondition_error(msg);
    }
};

struct Report {
    ExperimentConfig config;
    std::string law;
    PhaseRegime regime;
    std::size_t trials = 0;
    double ks = 0.0;
    double threshold = 0.0;
    bool pass = false;
    double runtime_seconds = 0.0;
    std::vector<double> raw;
    std::vector<double> scaled;
    std::vector<double> second_raw;

    nlohmann::json to_json() const {
        nlohmann::json j = {
            {"schema", "spiked.report.v1"},
            {"version", kVersion},
            {"mode", mode_name(config.mode)},
            {"sampler", sampler_name(config.sampler)},
            {"model", io::model_to_json(config.model)},
            {"seed", config.seed},
            {"trials", trials},
            {"law", law},
            {"ks", ks},
            {"threshold", threshold},
            {"pass", pass},
        };
        if (config.mode != ExperimentMode::LppEquivalence)
            j["regime"] = {{"name", regime_name(regime.regime)},
                           {"k", regime.k},
                           {"center", regime.center},
                           {"scale", regime.scale},
                           {"exponent", regime.exponent},
                           {"window_threshold", regime.window_threshold}};
        else
            j["second_sampler"] = "lpp";
        if (config.include_timing) j["runtime_seconds"] = runtime_seconds;
        return j;
    }
};

inline LawSpec law_spec_for(const LawDescriptor& d) {
    if (d.family == LawDescriptor::Family::G) return LawSpec::gk(d.k);
    if (d.k == 0) return LawSpec::f0();
    if (d.k == 1) return LawSpec::f1();
    return LawSpec::fk(d.k);
}

/// Draws the configured samples, scales them and compares with the target law.
inline Report run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.config = config;
    report.trials = static_cast<std::size_t>(config.trials);

    if (config.mode == ExperimentMode::LppEquivalence) {
        report.raw = draw_many(SamplerKind::Wishart, config.model, config.trials, config.seed, config.threads);
        report.second_raw = draw_many(SamplerKind::Lpp, config.model, config.trials, config.seed, config.threads,
                                      kSecondSamplerStream);
        report.law = "two-sample";
        report.ks = ks_two_sample(report.raw, report.second_raw);
        report.threshold = std::isnan(config.threshold)
                               ? ks_two_sample_critical(report.raw.size(), report.second_raw.size())
                               : config.threshold;
    } else {
        report.regime = config.mode == ExperimentMode::Theorem ? phase_classify(config.model, config.window_threshold)
                                                               : finite_n_regime(config.model);
        const LawDescriptor target =
            config.target_law == "auto" ? report.regime.predicted_law : parse_law_descriptor(config.target_law);
        const LawSpec law = law_spec_for(target);
        report.law = target.label();
        report.raw = draw_many(config.sampler, config.model, config.trials, config.seed, config.threads);
        report.scaled.reserve(report.raw.size());
        for (double l : report.raw) report.scaled.push_back(scale_sample(l, config.model, report.regime).scaled_x);
        const auto [lo, hi] = law.default_window();
        const DistributionTable table =
            DistributionTable::build(law, DistributionTable::linspace(lo, hi, config.table_points), 64, config.threads);
        report.ks = ks_distance(report.scaled, [&](double x) { return table.cdf(x); });
        report.threshold = config.threshold;
    }
    report.pass = report.ks <= report.threshold;
    report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// CSV of the drawn samples: trial, raw and (when available) scaled value.
inline void write_samples_csv(const Report& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const bool scaled = !report.scaled.empty();
    out << (scaled ? "trial,raw,scaled\n" : "trial,raw\n");
    for (std::size_t t = 0; t < report.raw.size(); ++t) {
        out << t << ',' << io::format_double(report.raw[t]);
        if (scaled) out << ',' << io::format_double(report.scaled[t]);
        out << '\n';
    }
}

}  // namespace spiked
