#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "spiked/error.hpp"

namespace spiked {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int n) {
    require(n >= 1, "gauss_legendre: n must be >= 1");
    if (n == 1) return {{0.0}, {2.0}};
    GaussLegendre rule{std::vector<double>(n), std::vector<double>(n)};
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0;
        double p1 = z;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// Gauss-Legendre rule mapped to [a, b].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
    auto rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return {std::move(rule.nodes), std::move(rule.weights)};
}

/// Composite Gauss-Legendre integral of f over [a, b].
template <class F>
double integrate_panels(F&& f, double a, double b, int panels, int order = 20) {
    require(order >= 1 && order <= 64, "integrate_panels: order must lie in [1, 64]");
    static thread_local std::vector<GaussLegendre> cache(65);
    if (cache[order].nodes.empty()) cache[order] = gauss_legendre(order);
    const GaussLegendre& rule = cache[order];
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * s;
    }
    return total;
}

/// Nodes and weights discretizing L^2((x, inf)).
///
/// The default transform is the rational map u = x + L t / (1 - t) applied to
/// Gauss-Legendre nodes on (0, 1). A truncated transform integrates over
/// (x, x + L) only and is meant for kernels that vanish to working precision
/// beyond the cut.
struct QuadratureGrid {
    enum class Transform { Rational, Truncated };

    double left_endpoint = 0.0;
    Transform transform = Transform::Rational;
    double scale = 10.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    std::string transform_label() const {
        return transform == Transform::Rational ? "rational" : "truncated";
    }

    static QuadratureGrid semi_infinite(double x, int n, double scale = 10.0) {
        require(n >= 2, "QuadratureGrid: need at least 2 nodes");
        require(scale > 0.0, "QuadratureGrid: scale must be positive");
        QuadratureGrid g;
        g.left_endpoint = x;
        g.transform = Transform::Rational;
        g.scale = scale;
        auto [t, w] = gauss_legendre(n, 0.0, 1.0);
        g.nodes.resize(n);
        g.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            const double one_minus = 1.0 - t[i];
            g.nodes[i] = x + scale * t[i] / one_minus;
            g.weights[i] = w[i] * scale / (one_minus * one_minus);
        }
        return g;
    }

    static QuadratureGrid truncated(double x, int n, double length) {
        require(n >= 2, "QuadratureGrid: need at least 2 nodes");
        require(length > 0.0, "QuadratureGrid: length must be positive");
        QuadratureGrid g;
        g.left_endpoint = x;
        g.transform = Transform::Truncated;
        g.scale = length;
        std::tie(g.nodes, g.weights) = gauss_legendre(n, x, x + length);
        return g;
    }

    /// Same transform with a different node count.
    QuadratureGrid resized(int n) const {
        return transform == Transform::Rational ? semi_infinite(left_endpoint, n, scale)
                                                : truncated(left_endpoint, n, scale);
    }
};

}  // namespace spiked
