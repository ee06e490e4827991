#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spiked/ensembles/model.hpp"
#include "spiked/error.hpp"
#include "spiked/fredholm/determinant.hpp"
#include "spiked/fredholm/quadrature.hpp"

namespace spiked {

/// Contours and discretization for the exact finite-(M, N) kernel
///
///   K(eta, zeta) = M/(2 pi i)^2 oint_Gamma dz oint_Sigma dw
///                  e^{-eta M (z - q) + zeta M (w - q)} (z/w)^M / (w - z) prod_k (pi_k - w)/(pi_k - z).
///
/// Sigma is the circle |w| = sigma_radius, Gamma the circle of radius
/// gamma_radius about gamma_center. Both are traversed counterclockwise.
struct FiniteKernelConfig {
    SpikedModel model;
    double q = 0.0;
    double gamma_center = 0.0;
    double gamma_radius = 0.0;
    double sigma_radius = 0.0;
    int n_contour_nodes = 256;
    int grid_size = 64;
    /// Length scale of the rational map for the eta variable.
    double grid_scale = 2.0;
    /// Conjugation e^{c(eta - zeta)} applied to the kernel; leaves the determinant unchanged.
    double conjugation = 0.0;
    bool check_convergence = true;

    static FiniteKernelConfig defaults(const SpikedModel& model) {
        model.validate();
        FiniteKernelConfig c;
        c.model = model;
        const auto pis = model.pis();
        const double lo = *std::min_element(pis.begin(), pis.end());
        const double hi = *std::max_element(pis.begin(), pis.end());
        c.q = 0.5 * lo;
        c.sigma_radius = 0.9 * c.q;
        c.gamma_center = 0.5 * (lo + hi);
        c.gamma_radius = 0.5 * (hi - lo) + 0.5 * (lo - c.q);
        return c;
    }

    /// Same model and contour shapes with a different q.
    FiniteKernelConfig with_q(double new_q) const {
        FiniteKernelConfig c = defaults(model);
        const auto pis = model.pis();
        const double lo = *std::min_element(pis.begin(), pis.end());
        const double hi = *std::max_element(pis.begin(), pis.end());
        c.q = new_q;
        c.sigma_radius = 0.9 * new_q;
        c.gamma_radius = 0.5 * (hi - lo) + 0.5 * (lo - new_q);
        c.n_contour_nodes = n_contour_nodes;
        c.grid_size = grid_size;
        c.grid_scale = grid_scale;
        c.conjugation = conjugation;
        c.check_convergence = check_convergence;
        return c;
    }

    void validate() const {
        model.validate();
        const auto pis = model.pis();
        const double lo = *std::min_element(pis.begin(), pis.end());
        require(q > 0.0 && q < lo, "FiniteKernelConfig: q must lie in (0, min pi)");
        require(sigma_radius > 0.0 && sigma_radius < q, "FiniteKernelConfig: Sigma circle must lie in Re w < q");
        require(gamma_center - gamma_radius > q, "FiniteKernelConfig: Gamma circle must lie in Re z > q");
        for (double p : pis)
            require(std::abs(p - gamma_center) < gamma_radius, "FiniteKernelConfig: Gamma must enclose every pi_j");
        require(n_contour_nodes >= 8, "FiniteKernelConfig: n_contour_nodes must be >= 8");
        require(grid_size >= 2, "FiniteKernelConfig: grid_size must be >= 2");
        require(grid_scale > 0.0, "FiniteKernelConfig: grid_scale must be positive");
        require(std::abs(conjugation) < model.M * std::min(gamma_center - gamma_radius - q, q - sigma_radius),
                "FiniteKernelConfig: conjugation too large for the contours");
    }
};

namespace detail {

/// Trapezoid nodes of both circles with the analytic weights folded in:
///   alpha_a = z_a^M / prod(pi - z_a) dz_a / (2 pi i),  beta_b = prod(pi - w_b) / w_b^M dw_b / (2 pi i).
struct FiniteContours {
    std::vector<std::complex<double>> z, alpha, w, beta;
};

inline FiniteContours finite_contours(const FiniteKernelConfig& config, int nodes) {
    using cd = std::complex<double>;
    const auto pis = config.model.pis();
    const int M = config.model.M;
    FiniteContours c;
    c.z.resize(nodes);
    c.alpha.resize(nodes);
    c.w.resize(nodes);
    c.beta.resize(nodes);
    for (int a = 0; a < nodes; ++a) {
        const double theta = 2.0 * std::numbers::pi * (a + 0.5) / nodes;
        const cd e = std::polar(1.0, theta);
        // dz / (2 pi i) = r e^{i theta} d theta / (2 pi)
        const cd z = config.gamma_center + config.gamma_radius * e;
        cd fz = config.gamma_radius * e / double(nodes);
        for (double p : pis) fz /= (p - z);
        fz *= std::pow(z, M);
        c.z[a] = z;
        c.alpha[a] = fz;

        const cd w = config.sigma_radius * e;
        cd fw = config.sigma_radius * e / double(nodes);
        for (double p : pis) fw *= (p - w);
        fw /= std::pow(w, M);
        c.w[a] = w;
        c.beta[a] = fw;
    }
    return c;
}

/// Raw kernel values K(eta_i, zeta_j) on a grid; the 1/(w - z) factor is kept
/// as an exact Cauchy matrix between the two sets of contour nodes.
inline Eigen::MatrixXd finite_kernel_values(const FiniteKernelConfig& config, const QuadratureGrid& grid,
                                            int contour_nodes) {
    const FiniteContours c = finite_contours(config, contour_nodes);
    const auto n = static_cast<Eigen::Index>(grid.size());
    const auto P = static_cast<Eigen::Index>(contour_nodes);
    const double M = config.model.M;
    const double q = config.q;

    Eigen::MatrixXcd A(n, P), B(n, P), C(P, P);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index a = 0; a < P; ++a) {
            A(i, a) = c.alpha[a] * std::exp(grid.nodes[i] * (config.conjugation - M * (c.z[a] - q)));
            B(i, a) = c.beta[a] * std::exp(grid.nodes[i] * (M * (c.w[a] - q) - config.conjugation));
        }
    for (Eigen::Index a = 0; a < P; ++a)
        for (Eigen::Index b = 0; b < P; ++b) C(a, b) = 1.0 / (c.w[b] - c.z[a]);

    const Eigen::MatrixXcd K = M * (A * C * B.transpose());
    if (!K.allFinite()) throw numerical_error("finite_mn_det: non-finite kernel value");
    const double scale = std::max(1.0, K.real().cwiseAbs().maxCoeff());
    const double imag = K.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-8 * scale)
        throw numerical_error("finite_mn_det: kernel has imaginary part " + std::to_string(imag) +
                              "; increase n_contour_nodes");

    return K.real();
}

inline double finite_mn_det_once(const FiniteKernelConfig& config, double xi, int grid_size, int contour_nodes) {
    const QuadratureGrid grid = QuadratureGrid::semi_infinite(xi, grid_size, config.grid_scale);
    return KernelMatrix::from_values(finite_kernel_values(config, grid, contour_nodes), grid).determinant();
}

}  // namespace detail

/// H(eta) = (M / 2 pi i) oint_Gamma e^{-eta M (z - q)} z^M / prod(pi - z) dz.
inline double finite_kernel_h(const FiniteKernelConfig& config, double eta) {
    const auto c = detail::finite_contours(config, config.n_contour_nodes);
    std::complex<double> s{0.0, 0.0};
    for (std::size_t a = 0; a < c.z.size(); ++a) s += c.alpha[a] * std::exp(-eta * config.model.M * (c.z[a] - config.q));
    return config.model.M * s.real();
}

/// J(zeta) = -(M / 2 pi i) oint_Sigma e^{zeta M (w - q)} prod(pi - w) / w^M dw.
inline double finite_kernel_j(const FiniteKernelConfig& config, double zeta) {
    const auto c = detail::finite_contours(config, config.n_contour_nodes);
    std::complex<double> s{0.0, 0.0};
    for (std::size_t b = 0; b < c.w.size(); ++b) s += c.beta[b] * std::exp(zeta * config.model.M * (c.w[b] - config.q));
    return -config.model.M * s.real();
}

/// K(eta, zeta) = int_0^inf H(eta + y) J(zeta + y) dy, the y-integral done on a
/// rational grid. Slower than the Cauchy-matrix form; kept for cross-checks.
inline double finite_kernel_factorized(const FiniteKernelConfig& config, double eta, double zeta, int y_nodes = 96) {
    const QuadratureGrid y = QuadratureGrid::semi_infinite(0.0, y_nodes, config.grid_scale);
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        total += y.weights[i] * finite_kernel_h(config, eta + y.nodes[i]) * finite_kernel_j(config, zeta + y.nodes[i]);
    return total;
}

/// P(lambda_1 <= xi) = det(1 - K) on L^2((xi, inf)). With check_convergence set,
/// grid and contour node counts are both doubled and must agree to 1e-8.
inline double finite_mn_det(const FiniteKernelConfig& config, double xi) {
    config.validate();
    require(std::isfinite(xi) && xi > 0.0, "finite_mn_det: xi must be positive");
    double value = detail::finite_mn_det_once(config, xi, config.grid_size, config.n_contour_nodes);
    if (config.check_convergence) {
        const double fine = detail::finite_mn_det_once(config, xi, 2 * config.grid_size, 2 * config.n_contour_nodes);
        detail::check_refinement(value, fine, 1e-8, "finite_mn_det");
        value = fine;
    }
    if (value < -1e-6 || value > 1.0 + 1e-6)
        throw numerical_error("finite_mn_det: determinant " + std::to_string(value) + " outside [0, 1]");
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace spiked
