#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spiked/error.hpp"
#include "spiked/fredholm/kernels.hpp"
#include "spiked/fredholm/quadrature.hpp"

namespace spiked {

struct FredholmOptions {
    QuadratureGrid::Transform transform = QuadratureGrid::Transform::Rational;
    /// L of the rational map, or the interval length of the truncated one.
    double scale = 10.0;
    /// Largest change allowed when the grid is doubled.
    double tolerance = 1e-8;
    bool check_convergence = true;

    QuadratureGrid grid(double x, int n) const {
        return transform == QuadratureGrid::Transform::Rational ? QuadratureGrid::semi_infinite(x, n, scale)
                                                                : QuadratureGrid::truncated(x, n, scale);
    }
};

/// Nystrom discretization sqrt(w_i) K(u_i, u_j) sqrt(w_j) of a kernel on a grid,
/// together with an LU factorization of I - K.
class KernelMatrix {
public:
    template <class Kernel>
    KernelMatrix(Kernel&& kernel, QuadratureGrid grid) : KernelMatrix(std::move(grid)) {
        const auto n = static_cast<Eigen::Index>(grid_.size());
        entries_.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                entries_(i, j) = sqrt_w_[i] * kernel(grid_.nodes[i], grid_.nodes[j]) * sqrt_w_[j];
        finish();
    }

    /// Takes raw kernel values K(u_i, u_j) already evaluated on the grid.
    static KernelMatrix from_values(const Eigen::MatrixXd& raw, QuadratureGrid grid) {
        const auto n = static_cast<Eigen::Index>(grid.size());
        require(raw.rows() == n && raw.cols() == n, "KernelMatrix: raw matrix does not match the grid");
        KernelMatrix km(std::move(grid));
        km.entries_ = km.sqrt_w_.asDiagonal() * raw * km.sqrt_w_.asDiagonal();
        km.finish();
        return km;
    }

    const QuadratureGrid& grid() const { return grid_; }
    const Eigen::MatrixXd& entries() const { return entries_; }

    /// det(I - K).
    double determinant() const { return lu_.determinant(); }

    double spectral_radius() const {
        if (entries_.isApprox(entries_.transpose(), 1e-12)) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_, Eigen::EigenvaluesOnly);
            return es.eigenvalues().cwiseAbs().maxCoeff();
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(entries_, false);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }

    void require_contraction() const {
        const double rho = spectral_radius();
        if (!(rho < 1.0))
            throw numerical_error("KernelMatrix: spectral radius " + std::to_string(rho) + " is not below 1");
    }

    /// <(1 - K)^{-1} f, g> from the values of f and g at the grid nodes,
    /// computed as <f, (1 - K^T)^{-1} g> so that growing f only meets a decaying vector.
    double resolvent_inner(std::span<const double> f, std::span<const double> g) const {
        const Eigen::VectorXd h = resolvent_adjoint(g);
        double total = 0.0;
        for (Eigen::Index i = 0; i < h.size(); ++i)
            if (h[i] != 0.0) total += sqrt_w_[i] * f[i] * h[i];
        return total;
    }

    /// (1 - K^T)^{-1} applied to sqrt(w) g.
    Eigen::VectorXd resolvent_adjoint(std::span<const double> g) const {
        require(g.size() == grid_.size(), "KernelMatrix: vector length does not match the grid");
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(g.size()));
        for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = sqrt_w_[i] * g[i];
        return lu_.transpose().solve(rhs);
    }

    const Eigen::VectorXd& sqrt_weights() const { return sqrt_w_; }

private:
    explicit KernelMatrix(QuadratureGrid grid) : grid_(std::move(grid)) {
        sqrt_w_.resize(static_cast<Eigen::Index>(grid_.size()));
        for (Eigen::Index i = 0; i < sqrt_w_.size(); ++i) sqrt_w_[i] = std::sqrt(grid_.weights[i]);
    }

    void finish() {
        if (!entries_.allFinite()) throw numerical_error("KernelMatrix: non-finite kernel value");
        const auto n = entries_.rows();
        lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(Eigen::MatrixXd::Identity(n, n) - entries_);
    }

    QuadratureGrid grid_;
    Eigen::VectorXd sqrt_w_;
    Eigen::MatrixXd entries_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

namespace detail {

inline void check_refinement(double coarse, double fine, double tolerance, const std::string& who) {
    if (!std::isfinite(coarse) || !std::isfinite(fine))
        throw numerical_error(who + ": non-finite value");
    if (std::abs(coarse - fine) > tolerance)
        throw numerical_error(who + ": not converged under grid doubling (change " +
                              std::to_string(std::abs(coarse - fine)) + " > " + std::to_string(tolerance) + ")");
}

/// Airy kernel matrix with Ai / Ai' evaluated once per node.
inline KernelMatrix airy_kernel_matrix(const QuadratureGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    std::vector<double> ai(n), aip(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ai[i] = airy_ai(grid.nodes[i]);
        aip[i] = airy_ai_prime(grid.nodes[i]);
    }
    Eigen::MatrixXd raw(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j)
            raw(i, j) = raw(j, i) = airy_kernel(grid.nodes[i], ai[i], aip[i], grid.nodes[j], ai[j], aip[j]);
    return KernelMatrix::from_values(raw, grid);
}

}  // namespace detail

/// det(1 - K) on L^2((x, inf)) by Nystrom discretization with grid_size nodes.
/// When options.check_convergence is set the determinant is recomputed on a
/// doubled grid and the refined value is returned.
template <class Kernel>
double fredholm_det(Kernel&& kernel, double x, int grid_size = 64, const FredholmOptions& options = {}) {
    require(grid_size >= 2, "fredholm_det: grid_size must be >= 2");
    const double coarse = KernelMatrix(kernel, options.grid(x, grid_size)).determinant();
    if (!options.check_convergence) {
        if (!std::isfinite(coarse)) throw numerical_error("fredholm_det: non-finite value");
        return coarse;
    }
    const double fine = KernelMatrix(kernel, options.grid(x, 2 * grid_size)).determinant();
    detail::check_refinement(coarse, fine, options.tolerance, "fredholm_det");
    return fine;
}

/// <(1 - K_x)^{-1} f, g> on L^2((x, inf)).
template <class Kernel, class F, class G>
double resolvent_inner(Kernel&& kernel, double x, F&& f, G&& g, int grid_size = 64,
                       const FredholmOptions& options = {}) {
    require(grid_size >= 2, "resolvent_inner: grid_size must be >= 2");
    auto evaluate = [&](int n) {
        const KernelMatrix km(kernel, options.grid(x, n));
        km.require_contraction();
        std::vector<double> gv(km.grid().size());
        for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = g(km.grid().nodes[i]);
        const Eigen::VectorXd h = km.resolvent_adjoint(gv);
        double total = 0.0;
        for (std::size_t i = 0; i < gv.size(); ++i)
            if (h[static_cast<Eigen::Index>(i)] != 0.0)
                total += km.sqrt_weights()[static_cast<Eigen::Index>(i)] * f(km.grid().nodes[i]) *
                         h[static_cast<Eigen::Index>(i)];
        return total;
    };
    const double coarse = evaluate(grid_size);
    if (!options.check_convergence) return coarse;
    const double fine = evaluate(2 * grid_size);
    detail::check_refinement(coarse, fine, 1e-7, "resolvent_inner");
    return fine;
}

/// Result of factoring det(1 - A_x - sum_m s_m (x) t_m) into the Airy determinant
/// and the k x k correction determinant.
struct RankCorrection {
    double airy_det = 1.0;
    double correction = 1.0;
    double product() const { return airy_det * correction; }
};

namespace detail {

/// Evaluates both factors on one grid; sfill(u, k, out) / tfill(v, k, out) write
/// s^(1..k)(u) and t^(1..k)(v).
template <class SFill, class TFill>
RankCorrection airy_rank_correction_on(const QuadratureGrid& grid, int k, SFill&& sfill, TFill&& tfill,
                                       bool check_norm) {
    const KernelMatrix km = airy_kernel_matrix(grid);
    RankCorrection out;
    out.airy_det = km.determinant();
    if (k == 0) return out;
    if (check_norm) km.require_contraction();

    const std::size_t n = grid.size();
    std::vector<std::vector<double>> t_vals(k, std::vector<double>(n));
    std::vector<double> buffer(k);
    for (std::size_t i = 0; i < n; ++i) {
        tfill(grid.nodes[i], k, buffer);
        for (int m = 0; m < k; ++m) t_vals[m][i] = buffer[m];
    }
    std::vector<Eigen::VectorXd> h(k);
    for (int m = 0; m < k; ++m) h[m] = km.resolvent_adjoint(t_vals[m]);

    Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(k, k);
    for (std::size_t i = 0; i < n; ++i) {
        bool needed = false;
        for (int m = 0; m < k; ++m) needed = needed || h[m][static_cast<Eigen::Index>(i)] != 0.0;
        if (!needed) continue;
        sfill(grid.nodes[i], k, buffer);
        const double sw = km.sqrt_weights()[static_cast<Eigen::Index>(i)];
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) gram(a, b) -= sw * buffer[a] * h[b][static_cast<Eigen::Index>(i)];
    }
    if (!gram.allFinite()) throw numerical_error("rank_correction_det: non-finite inner product");
    out.correction = gram.determinant();
    return out;
}

template <class SFill, class TFill>
RankCorrection airy_rank_correction(double x, int k, SFill&& sfill, TFill&& tfill, int grid_size,
                                    const FredholmOptions& options, bool check_norm = true) {
    const RankCorrection coarse = airy_rank_correction_on(options.grid(x, grid_size), k, sfill, tfill, check_norm);
    if (!options.check_convergence) return coarse;
    const RankCorrection fine = airy_rank_correction_on(options.grid(x, 2 * grid_size), k, sfill, tfill, false);
    check_refinement(coarse.airy_det, fine.airy_det, options.tolerance, "airy determinant");
    check_refinement(coarse.correction, fine.correction, 1e-7, "rank_correction_det");
    return fine;
}

}  // namespace detail

/// det(delta_mn - <(1 - A_x)^{-1} s^(m), t^(n)>)_{1<=m,n<=k} for families given
/// as callables s_family(m, u), t_family(n, v).
template <class SFamily, class TFamily>
double rank_correction_det(double x, int k, SFamily&& s_family, TFamily&& t_family, int grid_size = 64,
                           const FredholmOptions& options = {}) {
    require(k >= 0 && k <= 8, "rank_correction_det: k must lie in [0, 8]");
    if (k == 0) return 1.0;
    auto sfill = [&](double u, int count, std::vector<double>& out) {
        for (int m = 1; m <= count; ++m) out[m - 1] = s_family(m, u);
    };
    auto tfill = [&](double v, int count, std::vector<double>& out) {
        for (int m = 1; m <= count; ++m) out[m - 1] = t_family(m, v);
    };
    return detail::airy_rank_correction(x, k, sfill, tfill, grid_size, options).correction;
}

}  // namespace spiked
