#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

// pchip.hpp in Boost 1.74 calls isnan unqualified; <math.h> puts it in scope.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "spiked/distributions/laws.hpp"
#include "spiked/ensembles/model.hpp"
#include "spiked/error.hpp"
#include "spiked/parallel.hpp"

namespace spiked {

enum class LawKind { F0, F1, Fk, FkInterp, Gk, FiniteMN };

inline std::string law_kind_name(LawKind kind) {
    switch (kind) {
        case LawKind::F0: return "F0";
        case LawKind::F1: return "F1";
        case LawKind::Fk: return "Fk";
        case LawKind::FkInterp: return "FkInterp";
        case LawKind::Gk: return "Gk";
        case LawKind::FiniteMN: return "FiniteMN";
    }
    return "?";
}

inline LawKind parse_law_kind(const std::string& name) {
    for (LawKind k : {LawKind::F0, LawKind::F1, LawKind::Fk, LawKind::FkInterp, LawKind::Gk, LawKind::FiniteMN})
        if (law_kind_name(k) == name) return k;
    throw precondition_error("law must be one of F0, F1, Fk, FkInterp, Gk, FiniteMN; got '" + name + "'");
}

/// A distribution together with its parameters.
struct LawSpec {
    LawKind kind = LawKind::F0;
    int k = 0;
    std::vector<double> w;
    SpikedModel model;

    static LawSpec f0() { return {LawKind::F0, 0, {}, {}}; }
    static LawSpec f1() { return {LawKind::F1, 1, {}, {}}; }
    static LawSpec fk(int k) { return {LawKind::Fk, k, {}, {}}; }
    static LawSpec fk_interp(std::vector<double> w) {
        const int k = static_cast<int>(w.size());
        return {LawKind::FkInterp, k, std::move(w), {}};
    }
    static LawSpec gk(int k) { return {LawKind::Gk, k, {}, {}}; }
    static LawSpec finite_mn(SpikedModel m) { return {LawKind::FiniteMN, 0, {}, std::move(m)}; }

    /// Short label such as F_2, G_1 or F_2(w).
    std::string label() const {
        switch (kind) {
            case LawKind::F0: return "F_0";
            case LawKind::F1: return "F_1";
            case LawKind::Fk: return "F_" + std::to_string(k);
            case LawKind::FkInterp: return "F_" + std::to_string(k) + "(w)";
            case LawKind::Gk: return "G_" + std::to_string(k);
            case LawKind::FiniteMN: return "P(lambda_1<=x; " + describe(model) + ")";
        }
        return "?";
    }

    void validate() const {
        switch (kind) {
            case LawKind::F0:
            case LawKind::F1: break;
            case LawKind::Fk:
                require(k >= 0 && k <= kMaxFamilyIndex, "law Fk: k must lie in [0, 8], got " + std::to_string(k));
                break;
            case LawKind::FkInterp:
                require(k >= 1 && k <= kMaxFamilyIndex, "law FkInterp: k must lie in [1, 8], got " + std::to_string(k));
                require(static_cast<int>(w.size()) == k, "law FkInterp: w must have exactly k entries");
                for (double v : w) require(std::isfinite(v), "law FkInterp: w entries must be finite");
                break;
            case LawKind::Gk:
                require(k >= 1 && k <= kMaxGkOrder, "law Gk: k must lie in [1, 50], got " + std::to_string(k));
                break;
            case LawKind::FiniteMN: model.validate(); break;
        }
    }

    /// Interval on which the law is tabulated by default.
    std::pair<double, double> default_window() const {
        switch (kind) {
            case LawKind::Gk: {
                const double cut = 2.0 * std::sqrt(double(k)) + 8.0;
                return {-cut, cut};
            }
            case LawKind::FiniteMN: {
                const double g = model.gamma();
                double top = 1.0;
                for (double l : model.spikes) top = std::max(top, l);
                return {1e-3, 4.0 * top * (1.0 + 1.0 / g) * (1.0 + 1.0 / g) + 1.0};
            }
            default: return {kAiryWindowMin, kAiryWindowMax};
        }
    }

    /// Bound on the absolute error, set by the grid-doubling gates.
    double accuracy() const {
        switch (kind) {
            case LawKind::F0:
            case LawKind::Gk:
            case LawKind::FiniteMN: return 1e-8;
            default: return 1e-7;
        }
    }

    double operator()(double x, int grid_size = 64) const {
        switch (kind) {
            case LawKind::F0: return f_gue(x, grid_size);
            case LawKind::F1: return f_k(x, 1, grid_size);
            case LawKind::Fk: return f_k(x, k, grid_size);
            case LawKind::FkInterp: return f_k_interp(x, k, w, grid_size);
            case LawKind::Gk: return g_k(x, k, grid_size);
            case LawKind::FiniteMN: {
                FiniteKernelConfig c = FiniteKernelConfig::defaults(model);
                c.grid_size = grid_size;
                return finite_mn_det(c, x);
            }
        }
        return 0.0;
    }
};

/// Tabulated CDF with monotone (Fritsch-Carlson) interpolation between nodes.
class DistributionTable {
public:
    DistributionTable(LawSpec law, std::vector<double> xs, std::vector<double> values, double accuracy,
                      int grid_size)
        : law_(std::move(law)), xs_(std::move(xs)), values_(std::move(values)), accuracy_(accuracy),
          grid_size_(grid_size) {
        validate();
        if (xs_.size() >= 4) {
            std::vector<double> x = xs_;
            std::vector<double> y = values_;
            interpolant_ = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x),
                                                                                                   std::move(y));
        }
    }

    /// Evaluates the law at every abscissa, in parallel.
    static DistributionTable build(const LawSpec& law, std::vector<double> xs, int grid_size = 64,
                                   int threads = default_thread_count()) {
        law.validate();
        require(!xs.empty(), "DistributionTable: need at least one abscissa");
        require(std::is_sorted(xs.begin(), xs.end()) && std::adjacent_find(xs.begin(), xs.end()) == xs.end(),
                "DistributionTable: abscissae must be strictly increasing");
        std::vector<double> values(xs.size());
        parallel_for(xs.size(), threads, [&](std::size_t i) { values[i] = law(xs[i], grid_size); });
        return DistributionTable(law, std::move(xs), std::move(values), law.accuracy(), grid_size);
    }

    static std::vector<double> linspace(double a, double b, int points) {
        require(points >= 2, "linspace: need at least 2 points");
        require(a < b, "linspace: need x_min < x_max");
        std::vector<double> xs(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (points - 1);
        xs.back() = b;
        return xs;
    }

    const LawSpec& law() const { return law_; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& values() const { return values_; }
    double accuracy() const { return accuracy_; }
    int grid_size() const { return grid_size_; }

    void validate() const {
        require(!xs_.empty() && xs_.size() == values_.size(), "DistributionTable: xs and values must match");
        for (std::size_t i = 1; i < xs_.size(); ++i)
            require(xs_[i] > xs_[i - 1], "DistributionTable: abscissae must be strictly increasing");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            require(std::isfinite(values_[i]) && values_[i] >= -1e-6 && values_[i] <= 1.0 + 1e-6,
                    "DistributionTable: value outside [0, 1] at x = " + std::to_string(xs_[i]));
            if (i > 0)
                require(values_[i] >= values_[i - 1] - 1e-8,
                        "DistributionTable: values decrease at x = " + std::to_string(xs_[i]));
        }
    }

    /// Interpolated CDF; constant beyond the tabulated range.
    double cdf(double x) const {
        if (x <= xs_.front()) return std::clamp(values_.front(), 0.0, 1.0);
        if (x >= xs_.back()) return std::clamp(values_.back(), 0.0, 1.0);
        double v;
        if (interpolant_) {
            v = (*interpolant_)(x);
        } else {
            const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
            const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
            v = values_[i - 1] + t * (values_[i] - values_[i - 1]);
        }
        return std::clamp(v, 0.0, 1.0);
    }

    /// Smallest tabulated-range x with cdf(x) within 1e-6 of p, by bisection.
    double quantile(double p) const {
        require(p > 0.0 && p < 1.0, "quantile: p must lie in (0, 1)");
        double lo = xs_.front();
        double hi = xs_.back();
        if (cdf(lo) >= p) return lo;
        if (cdf(hi) < p - 1e-6) throw numerical_error("quantile: p beyond the tabulated range");
        for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double f = cdf(mid);
            if (std::abs(f - p) <= 1e-6 && hi - lo < 1e-9) return mid;
            (f < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

private:
    LawSpec law_;
    std::vector<double> xs_;
    std::vector<double> values_;
    double accuracy_ = 0.0;
    int grid_size_ = 64;
    std::shared_ptr<boost::math::interpolators::pchip<std::vector<double>>> interpolant_;
};

}  // namespace spiked
