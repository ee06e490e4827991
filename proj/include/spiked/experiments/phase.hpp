#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "spiked/ensembles/model.hpp"
#include "spiked/error.hpp"

namespace spiked {

enum class Regime { Subcritical, Critical, Supercritical };

inline std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Critical: return "critical";
        case Regime::Supercritical: return "supercritical";
    }
    return "?";
}

/// Limit law named by family and index: F_k (Airy type) or G_k (GUE type).
struct LawDescriptor {
    enum class Family { F, G } family = Family::F;
    int k = 0;

    std::string label() const { return std::string(family == Family::F ? "F" : "G") + std::to_string(k); }
    bool operator==(const LawDescriptor&) const = default;
};

inline LawDescriptor parse_law_descriptor(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != '_') s += c;
    if (s.size() >= 2 && (s[0] == 'F' || s[0] == 'G')) {
        try {
            std::size_t used = 0;
            const int k = std::stoi(s.substr(1), &used);
            if (used == s.size() - 1 && k >= 0 && (s[0] == 'F' || k >= 1))
                return {s[0] == 'F' ? LawDescriptor::Family::F : LawDescriptor::Family::G, k};
        } catch (const std::exception&) {
        }
    }
    throw precondition_error("law descriptor must look like F0..F8 or G1..G50, got '" + text + "'");
}

/// Phase of a model with its predicted limit law and the affine scaling
/// x = (lambda_1 - center) M^exponent / scale.
struct PhaseRegime {
    Regime regime = Regime::Subcritical;
    int k = 0;
    LawDescriptor predicted_law;
    double center = 0.0;
    double scale = 1.0;
    double exponent = 2.0 / 3.0;
    double window_threshold = 0.5;

    bool operator==(const PhaseRegime&) const = default;
};

/// Half-width of the critical window around 1 + 1/gamma.
inline double critical_window(const SpikedModel& model, double window_threshold) {
    const double g = model.gamma();
    return window_threshold * std::pow(1.0 + g, 2.0 / 3.0) / (g * std::cbrt(double(model.M)));
}

inline PhaseRegime phase_classify(const SpikedModel& model, double window_threshold = 0.5) {
    model.validate();
    require(model.M >= model.N, "phase_classify: need gamma >= 1 (M >= N), got " + describe(model));
    require(window_threshold >= 0.0 && std::isfinite(window_threshold),
            "phase_classify: window_threshold must be non-negative");
    const double g = model.gamma();
    const double critical = 1.0 + 1.0 / g;
    const auto spikes = model.sorted_spikes();
    const double top = spikes.empty() ? 1.0 : spikes.front();
    const int multiplicity = static_cast<int>(std::count(spikes.begin(), spikes.end(), top));
    const double window = critical_window(model, window_threshold);

    PhaseRegime out;
    out.window_threshold = window_threshold;
    if (top > critical + window) {
        const double g2 = g * g;
        const double inner = top * top - top * top / (g2 * (top - 1.0) * (top - 1.0));
        if (!(inner > 0.0)) throw numerical_error("phase_classify: supercritical scale is not real");
        out.regime = Regime::Supercritical;
        out.k = multiplicity;
        out.predicted_law = {LawDescriptor::Family::G, multiplicity};
        out.center = top + top / (g2 * (top - 1.0));
        out.scale = std::sqrt(inner);
        out.exponent = 0.5;
        return out;
    }
    out.regime = std::abs(top - critical) <= window && !spikes.empty() ? Regime::Critical : Regime::Subcritical;
    out.k = out.regime == Regime::Critical ? multiplicity : 0;
    out.predicted_law = {LawDescriptor::Family::F, out.k};
    out.center = critical * critical;
    out.scale = std::pow(1.0 + g, 4.0 / 3.0) / g;
    out.exponent = 2.0 / 3.0;
    return out;
}

/// Scaling (lambda_1 - l_1) sqrt(M) / l_1 for M samples of N = k variables with
/// equal population eigenvalues l_1; the limit is G_N.
inline PhaseRegime finite_n_regime(const SpikedModel& model) {
    model.validate();
    const double l1 = model.population(0);
    for (int i = 1; i < model.N; ++i)
        require(model.population(i) == l1, "finite_n_regime: all N population eigenvalues must be equal");
    PhaseRegime out;
    out.regime = Regime::Supercritical;
    out.k = model.N;
    out.predicted_law = {LawDescriptor::Family::G, model.N};
    out.center = l1;
    out.scale = l1;
    out.exponent = 0.5;
    out.window_threshold = 0.0;
    return out;
}

struct ScaledSample {
    double raw_lambda1 = 0.0;
    double scaled_x = 0.0;
    SpikedModel model_ref;
    PhaseRegime regime_ref;

    /// Recovers the raw eigenvalue from the scaled value.
    double unscaled() const {
        return regime_ref.center + scaled_x * regime_ref.scale / std::pow(double(model_ref.M), regime_ref.exponent);
    }
};

inline ScaledSample scale_sample(double lambda1, const SpikedModel& model, const PhaseRegime& regime) {
    const bool matches = regime == phase_classify(model, regime.window_threshold) ||
                         (regime.window_threshold == 0.0 && regime == finite_n_regime(model));
    if (!matches) throw precondition_error("scale_sample: regime was not produced from this model");
    return {lambda1, (lambda1 - regime.center) * std::pow(double(model.M), regime.exponent) / regime.scale, model,
            regime};
}

/// w_j = (1 + 1/gamma - l_j) gamma M^{1/3} / (1 + gamma)^{2/3}, j = 1..r.
inline double critical_window_w(const SpikedModel& model, int j) {
    model.validate();
    require(j >= 1 && j <= model.rank(), "critical_window_w: j must lie in [1, r]");
    const double g = model.gamma();
    return (1.0 + 1.0 / g - model.spikes[static_cast<std::size_t>(j - 1)]) * g * std::cbrt(double(model.M)) /
           std::pow(1.0 + g, 2.0 / 3.0);
}

}  // namespace spiked
