#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spiked/ensembles/model.hpp"
#include "spiked/error.hpp"
#include "spiked/fredholm/determinant.hpp"
#include "spiked/fredholm/finite_kernel.hpp"
#include "spiked/fredholm/kernels.hpp"
#include "spiked/specfun/airy_family.hpp"
#include "spiked/specfun/hermite.hpp"
#include "spiked/specfun/painleve.hpp"

namespace spiked {

/// Window on which the Airy-type laws are evaluated to full accuracy.
inline constexpr double kAiryWindowMin = -12.0;
inline constexpr double kAiryWindowMax = 8.0;
inline constexpr int kMaxGkOrder = 50;

namespace detail {

inline void check_airy_window(double x, const char* who) {
    if (!(x >= kAiryWindowMin && x <= kAiryWindowMax))
        throw precondition_error(std::string(who) + ": x = " + std::to_string(x) +
                                 " is outside the accuracy window [-12, 8]");
}

inline void check_grid_size(int grid_size, const char* who) {
    if (grid_size < 8) throw precondition_error(std::string(who) + ": grid_size must be >= 8");
}

inline FredholmOptions law_options(bool check_convergence) {
    FredholmOptions o;
    o.check_convergence = check_convergence;
    return o;
}

}  // namespace detail

/// F_0(x) = det(1 - A_x), the GUE Tracy-Widom distribution.
inline double f_gue(double x, int grid_size = 64, bool check_convergence = true) {
    detail::check_airy_window(x, "f_gue");
    detail::check_grid_size(grid_size, "f_gue");
    auto none = [](double, int, std::vector<double>&) {};
    return detail::airy_rank_correction(x, 0, none, none, grid_size, detail::law_options(check_convergence))
        .product();
}

/// F_0(x) = exp(-int_x^inf (y - x) u(y)^2 dy) with u the Hastings-McLeod solution.
inline double f_gue_painleve(double x) {
    detail::check_airy_window(x, "f_gue_painleve");
    return std::exp(-default_hastings_mcleod().second_moment_tail(x));
}

/// F_1(x) = F_0(x) exp(int_x^inf u(y) dy).
inline double f1_painleve(double x) {
    detail::check_airy_window(x, "f1_painleve");
    const auto& u = default_hastings_mcleod();
    return std::exp(-u.second_moment_tail(x) + u.first_moment_tail(x));
}

/// F_k(x) = F_0(x) det(delta_mn - <(1 - A_x)^{-1} s^(m), t^(n)>), k = 0..8.
inline double f_k(double x, int k, int grid_size = 64, bool check_convergence = true) {
    require(k >= 0 && k <= kMaxFamilyIndex, "f_k: k must lie in [0, 8], got " + std::to_string(k));
    if (k == 0) return f_gue(x, grid_size, check_convergence);
    detail::check_airy_window(x, "f_k");
    detail::check_grid_size(grid_size, "f_k");
    auto sfill = [](double u, int count, std::vector<double>& out) {
        const auto s = s_family(u, count);
        std::copy_n(s.begin(), count, out.begin());
    };
    auto tfill = [](double v, int count, std::vector<double>& out) {
        const auto t = t_family(v, count);
        std::copy_n(t.begin(), count, out.begin());
    };
    return detail::airy_rank_correction(x, k, sfill, tfill, grid_size, detail::law_options(check_convergence))
        .product();
}

/// Interpolating family F_k(x; w_1..w_k).
inline double f_k_interp(double x, int k, std::span<const double> w, int grid_size = 64,
                         bool check_convergence = true) {
    require(k >= 1 && k <= kMaxFamilyIndex, "f_k_interp: k must lie in [1, 8], got " + std::to_string(k));
    require(static_cast<int>(w.size()) == k, "f_k_interp: expected " + std::to_string(k) + " parameters, got " +
                                                 std::to_string(w.size()));
    for (double wj : w) require(std::isfinite(wj), "f_k_interp: parameters must be finite");
    detail::check_airy_window(x, "f_k_interp");
    detail::check_grid_size(grid_size, "f_k_interp");
    const ContourSpec contour = ContourSpec::below_poles(w);

    auto evaluate = [&](int n, bool check_norm) {
        SFamilyWalker walker(k, w, contour);
        auto sfill = [&](double u, int count, std::vector<double>& out) {
            const auto s = walker(u);
            std::copy_n(s.begin(), count, out.begin());
        };
        auto tfill = [&](double v, int count, std::vector<double>& out) {
            const auto t = t_family_w(v, count, w);
            std::copy_n(t.begin(), count, out.begin());
        };
        return detail::airy_rank_correction_on(QuadratureGrid::semi_infinite(x, n), k, sfill, tfill, check_norm);
    };
    const RankCorrection coarse = evaluate(grid_size, true);
    if (!check_convergence) return coarse.product();
    const RankCorrection fine = evaluate(2 * grid_size, false);
    detail::check_refinement(coarse.airy_det, fine.airy_det, 1e-8, "airy determinant");
    detail::check_refinement(coarse.correction, fine.correction, 1e-7, "rank_correction_det");
    return fine.product();
}

namespace detail {

/// Beyond |u| > hermite_cutoff(k) the Hermite kernel is below 1e-30.
inline double hermite_cutoff(int k) { return 2.0 * std::sqrt(double(k)) + 12.0; }

inline QuadratureGrid hermite_grid(double x, int k, int n) {
    const double cut = hermite_cutoff(k);
    const double a = std::max(x, -cut);
    const double length = a < cut ? cut - a : 1.0;
    return QuadratureGrid::truncated(a, n, length);
}

inline double g_k_once(double x, int k, int n) {
    const QuadratureGrid grid = hermite_grid(x, k, n);
    const auto size = static_cast<Eigen::Index>(grid.size());
    std::vector<std::vector<double>> phi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) phi[i] = hermite_functions(k, grid.nodes[i]);
    Eigen::MatrixXd raw(size, size);
    const double rk = std::sqrt(double(k));
    for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = i; j < size; ++j) {
            const auto& a = phi[static_cast<std::size_t>(i)];
            const auto& b = phi[static_cast<std::size_t>(j)];
            const double d = grid.nodes[static_cast<std::size_t>(i)] - grid.nodes[static_cast<std::size_t>(j)];
            double v;
            if (std::abs(d) < 1e-3) {
                v = 0.0;
                for (int m = 0; m < k; ++m) v += a[m] * b[m];
            } else {
                v = rk * (a[k] * b[k - 1] - a[k - 1] * b[k]) / d;
            }
            raw(i, j) = raw(j, i) = v;
        }
    return KernelMatrix::from_values(raw, grid).determinant();
}

}  // namespace detail

/// G_k(x) = det(1 - H^(k)_x): distribution of the largest eigenvalue of a k x k
/// GUE matrix with density proportional to e^{-tr H^2 / 2}.
inline double g_k(double x, int k, int grid_size = 64, bool check_convergence = true) {
    require(k >= 1 && k <= kMaxGkOrder, "g_k: k must lie in [1, 50], got " + std::to_string(k));
    require(std::isfinite(x), "g_k: x must be finite");
    detail::check_grid_size(grid_size, "g_k");
    const int n = std::max(grid_size, 2 * k + 40);
    const double coarse = detail::g_k_once(x, k, n);
    if (!check_convergence) return coarse;
    const double fine = detail::g_k_once(x, k, 2 * n);
    detail::check_refinement(coarse, fine, 1e-8, "g_k");
    return fine;
}

/// Exact P(lambda_1 <= xi) for the spiked complex Wishart model.
inline double finite_cdf(const SpikedModel& model, double xi) {
    return finite_mn_det(FiniteKernelConfig::defaults(model), xi);
}

}  // namespace spiked
