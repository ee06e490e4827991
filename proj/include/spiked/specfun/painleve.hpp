#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spiked/error.hpp"
#include "spiked/fredholm/quadrature.hpp"
#include "spiked/specfun/airy.hpp"

namespace spiked {

namespace detail {

/// Chebyshev-Lobatto nodes on [-1, 1] in ascending order with barycentric weights.
struct LobattoPanel {
    std::vector<double> nodes;
    std::vector<double> bary;
    Eigen::MatrixXd diff;   // first derivative on [-1, 1]
    Eigen::MatrixXd diff2;  // second derivative on [-1, 1]

    explicit LobattoPanel(int order) : nodes(order + 1), bary(order + 1), diff(order + 1, order + 1) {
        const int n = order;
        for (int j = 0; j <= n; ++j) {
            nodes[j] = -std::cos(std::numbers::pi * j / n);
            bary[j] = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
        }
        for (int i = 0; i <= n; ++i) {
            double row = 0.0;
            for (int j = 0; j <= n; ++j) {
                if (i == j) continue;
                diff(i, j) = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                row += diff(i, j);
            }
            diff(i, i) = -row;
        }
        diff2 = diff * diff;
    }

    /// Barycentric interpolation weights for evaluating at t in [-1, 1].
    /// Returns the node index when t coincides with a node.
    int interpolation_weights(double t, std::vector<double>& out) const {
        const std::size_t n = nodes.size();
        out.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (t == nodes[j]) {
                out[j] = 1.0;
                return static_cast<int>(j);
            }
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = bary[j] / (t - nodes[j]);
            total += out[j];
        }
        for (double& v : out) v /= total;
        return -1;
    }
};

/// u(x) ~ -sqrt(-x/2) (1 + 1/(8x^3) - 73/(128x^6) + 10657/(1024x^9)) as x -> -inf.
inline double hastings_mcleod_left_asymptote(double x) {
    const double x3 = x * x * x;
    return -std::sqrt(-x / 2.0) * (1.0 + 1.0 / (8.0 * x3) - 73.0 / (128.0 * x3 * x3) +
                                   10657.0 / (1024.0 * x3 * x3 * x3));
}

}  // namespace detail

/// Hastings-McLeod solution of u'' = 2u^3 + xu sampled on a piecewise
/// Chebyshev grid. Immutable after construction.
class PainleveSolution {
public:
    std::vector<double> grid;
    std::vector<double> u_values;
    std::vector<double> u_prime_values;
    double left_boundary = 0.0;
    double right_boundary = 0.0;
    int newton_iterations = 0;

    PainleveSolution(int panels, int order, double left, double right)
        : left_boundary(left), right_boundary(right), panels_(panels), order_(order), basis_(order) {}

    int panels() const { return panels_; }
    int order() const { return order_; }
    double panel_width() const { return (right_boundary - left_boundary) / panels_; }

    double value(double x) const { return interpolate(x, false); }
    double derivative(double x) const { return interpolate(x, true); }

    /// Largest |u'' - 2u^3 - xu| at the midpoints between consecutive grid nodes,
    /// using the local panel interpolant.
    double max_interior_residual() const {
        double worst = 0.0;
        std::vector<double> wts;
        for (int e = 0; e < panels_; ++e) {
            const double h = 0.5 * panel_width();
            Eigen::VectorXd local(order_ + 1);
            for (int j = 0; j <= order_; ++j) local[j] = u_values[e * order_ + j];
            const Eigen::VectorXd d2 = basis_.diff2 * local / (h * h);
            for (int j = 0; j < order_; ++j) {
                const double t = 0.5 * (basis_.nodes[j] + basis_.nodes[j + 1]);
                basis_.interpolation_weights(t, wts);
                double u = 0.0, upp = 0.0;
                for (int k = 0; k <= order_; ++k) {
                    u += wts[k] * local[k];
                    upp += wts[k] * d2[k];
                }
                const double x = panel_left(e) + h * (t + 1.0);
                worst = std::max(worst, std::abs(upp - 2.0 * u * u * u - x * u));
            }
        }
        return worst;
    }

    /// Integral of f(y, u(y)) over [a, b] within the solved range.
    template <class F>
    double integrate(F&& f, double a, double b) const {
        static const GaussLegendre rule = gauss_legendre(24);
        a = std::max(a, left_boundary);
        b = std::min(b, right_boundary);
        if (b <= a) return 0.0;
        double total = 0.0;
        for (int e = 0; e < panels_; ++e) {
            const double lo = std::max(a, panel_left(e));
            const double hi = std::min(b, panel_left(e + 1));
            if (hi <= lo) continue;
            const double half = 0.5 * (hi - lo);
            const double mid = 0.5 * (hi + lo);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double y = mid + half * rule.nodes[i];
                total += half * rule.weights[i] * f(y, value(y));
            }
        }
        return total;
    }

    /// int_x^inf (y - x) u(y)^2 dy, with the part beyond right_boundary taken from u ~ -Ai.
    double second_moment_tail(double x) const {
        require(x >= left_boundary, "PainleveSolution: x below the solved range");
        const double inner = integrate([x](double y, double u) { return (y - x) * u * u; }, x, right_boundary);
        const double X = right_boundary;
        const double ai = airy_ai(X), aip = airy_ai_prime(X);
        const double tail_sq = aip * aip - X * ai * ai;                       // int_X^inf Ai^2
        const double tail_ysq = -(X * X * ai * ai - X * aip * aip + ai * aip) / 3.0;  // int_X^inf y Ai^2
        return inner + tail_ysq - x * tail_sq;
    }

    /// int_x^inf u(y) dy.
    double first_moment_tail(double x) const {
        require(x >= left_boundary, "PainleveSolution: x below the solved range");
        return integrate([](double, double u) { return u; }, x, right_boundary) -
               airy_ai_tail_integral(right_boundary);
    }

private:
    friend PainleveSolution hastings_mcleod(double, double, int);

    double panel_left(int e) const { return left_boundary + e * panel_width(); }

    double interpolate(double x, bool derivative) const {
        if (x < left_boundary || x > right_boundary)
            throw precondition_error("PainleveSolution: x = " + std::to_string(x) + " outside [" +
                                     std::to_string(left_boundary) + ", " + std::to_string(right_boundary) + "]");
        int e = static_cast<int>((x - left_boundary) / panel_width());
        e = std::clamp(e, 0, panels_ - 1);
        const double h = 0.5 * panel_width();
        const double t = std::clamp((x - panel_left(e)) / h - 1.0, -1.0, 1.0);
        std::vector<double> wts;
        basis_.interpolation_weights(t, wts);
        double out = 0.0;
        if (!derivative) {
            for (int k = 0; k <= order_; ++k) out += wts[k] * u_values[e * order_ + k];
            return out;
        }
        Eigen::VectorXd local(order_ + 1);
        for (int j = 0; j <= order_; ++j) local[j] = u_values[e * order_ + j];
        const Eigen::VectorXd d1 = basis_.diff * local / h;
        for (int k = 0; k <= order_; ++k) out += wts[k] * d1[k];
        return out;
    }

    int panels_;
    int order_;
    detail::LobattoPanel basis_;
};

/// Solves for the Hastings-McLeod solution on [x_min, x_max] by damped Newton
/// iteration on a piecewise Chebyshev collocation system.
///
/// Boundary data: u(x_max) = -Ai(x_max) on the right, the x -> -inf asymptotic
/// series on the left. The left end is extended to at least -12 so that the
/// truncated series is accurate to ~1e-10. The derivative -Ai'(x_max) is
/// reproduced by the solution and checked, not imposed.
inline PainleveSolution hastings_mcleod(double x_min, double x_max, int n_points) {
    require(x_min < -4.0, "hastings_mcleod: x_min must be < -4");
    require(x_max > 4.0, "hastings_mcleod: x_max must be > 4");
    require(n_points >= 32, "hastings_mcleod: n_points must be >= 32");

    const int order = 16;
    const double left = std::min(x_min, -12.0);
    const double right = x_max;
    const double span = right - left;
    const int panels = std::max({4, (n_points - 1 + order - 1) / order, static_cast<int>(std::ceil(span))});
    PainleveSolution sol(panels, order, left, right);

    const detail::LobattoPanel& basis = sol.basis_;
    const double h = 0.5 * span / panels;
    const int n = panels * order + 1;

    std::vector<double> x(n);
    for (int e = 0; e < panels; ++e)
        for (int j = 0; j <= order; ++j) x[e * order + j] = left + e * 2.0 * h + h * (basis.nodes[j] + 1.0);
    x[n - 1] = right;

    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) {
        const double ai = airy_ai(x[i]);
        u[i] = -std::sqrt(ai * ai + std::max(0.0, -x[i]) / 2.0);
    }
    const double left_value = detail::hastings_mcleod_left_asymptote(left);
    const double right_value = -airy_ai(right);

    const Eigen::MatrixXd d1 = basis.diff / h;
    const Eigen::MatrixXd d2 = basis.diff2 / (h * h);

    auto assemble = [&](const Eigen::VectorXd& v, Eigen::VectorXd& res, Eigen::MatrixXd* jac) {
        res.setZero(n);
        if (jac) jac->setZero(n, n);
        int row = 0;
        res[row] = v[0] - left_value;
        if (jac) (*jac)(row, 0) = 1.0;
        ++row;
        for (int e = 0; e < panels; ++e) {
            const int base = e * order;
            for (int j = 1; j < order; ++j) {
                const int i = base + j;
                double acc = 0.0;
                for (int k = 0; k <= order; ++k) acc += d2(j, k) * v[base + k];
                res[row] = acc - 2.0 * v[i] * v[i] * v[i] - x[i] * v[i];
                if (jac) {
                    for (int k = 0; k <= order; ++k) (*jac)(row, base + k) += d2(j, k);
                    (*jac)(row, i) -= 6.0 * v[i] * v[i] + x[i];
                }
                ++row;
            }
            if (e + 1 < panels) {
                // u' continuity across the shared node
                double acc = 0.0;
                for (int k = 0; k <= order; ++k) acc += d1(order, k) * v[base + k] - d1(0, k) * v[base + order + k];
                res[row] = acc;
                if (jac)
                    for (int k = 0; k <= order; ++k) {
                        (*jac)(row, base + k) += d1(order, k);
                        (*jac)(row, base + order + k) -= d1(0, k);
                    }
                ++row;
            }
        }
        res[row] = v[n - 1] - right_value;
        if (jac) (*jac)(row, n - 1) = 1.0;
    };

    Eigen::VectorXd res(n), trial_res(n);
    Eigen::MatrixXd jac(n, n);
    double norm = 0.0;
    bool converged = false;
    int iter = 0;
    for (; iter < 60; ++iter) {
        assemble(u, res, &jac);
        norm = res.norm();
        const Eigen::VectorXd step = jac.partialPivLu().solve(-res);
        double lambda = 1.0;
        Eigen::VectorXd trial = u + step;
        assemble(trial, trial_res, nullptr);
        while (trial_res.norm() > (1.0 - 1e-4 * lambda) * norm && lambda > 1e-4) {
            lambda *= 0.5;
            trial = u + lambda * step;
            assemble(trial, trial_res, nullptr);
        }
        u = trial;
        if (lambda * step.lpNorm<Eigen::Infinity>() < 1e-13) {
            converged = true;
            ++iter;
            break;
        }
    }
    assemble(u, res, nullptr);
    if (!converged && res.lpNorm<Eigen::Infinity>() > 1e-9)
        throw numerical_error("hastings_mcleod: Newton did not converge after " + std::to_string(iter) +
                              " iterations, residual " + std::to_string(res.lpNorm<Eigen::Infinity>()));

    sol.newton_iterations = iter;
    sol.grid = x;
    sol.u_values.assign(u.data(), u.data() + n);
    sol.u_prime_values.assign(n, 0.0);
    for (int e = 0; e < panels; ++e) {
        const Eigen::VectorXd local = u.segment(e * order, order + 1);
        const Eigen::VectorXd du = d1 * local;
        for (int j = 0; j <= order; ++j) {
            const int i = e * order + j;
            if (j == 0 && e > 0)
                sol.u_prime_values[i] = 0.5 * (sol.u_prime_values[i] + du[j]);
            else
                sol.u_prime_values[i] = du[j];
        }
    }
    return sol;
}

/// Shared solution on [-12, 8] used by the Painleve routes of the distributions module.
inline const PainleveSolution& default_hastings_mcleod() {
    static const PainleveSolution sol = hastings_mcleod(-12.0, 8.0, 641);
    return sol;
}

}  // namespace spiked
