#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "spiked/error.hpp"
#include "spiked/fredholm/determinant.hpp"
#include "spiked/fredholm/finite_kernel.hpp"
#include "spiked/fredholm/kernels.hpp"
#include "spiked/fredholm/quadrature.hpp"
#include "spiked/specfun/airy_family.hpp"
#include "spiked/specfun/hermite.hpp"
#include "spiked/verify/oracles.hpp"

namespace {

using namespace spiked;

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
    const auto [x, w] = gauss_legendre(6, -1.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 11);
    EXPECT_NEAR(s, (std::pow(2.0, 12) - 1.0) / 12.0, 1e-11);
}

TEST(Quadrature, SemiInfiniteGridIntegratesExponential) {
    const auto g = QuadratureGrid::semi_infinite(-1.0, 64);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::exp(-g.nodes[i]);
    EXPECT_NEAR(s, std::exp(1.0), 1e-10);
    EXPECT_EQ(g.resized(32).size(), 32u);
    EXPECT_THROW(QuadratureGrid::semi_infinite(0.0, 1), precondition_error);
}

TEST(Kernels, AiryKernelValueAndSymmetry) {
    EXPECT_NEAR(airy_kernel(0.0, 1.0), oracle::kAiryKernel01, 1e-14);
    EXPECT_DOUBLE_EQ(airy_kernel(0.3, -1.7), airy_kernel(-1.7, 0.3));
    // diagonal branch joins the off-diagonal formula continuously
    EXPECT_NEAR(airy_kernel(0.5, 0.5), airy_kernel(0.5, 0.5 + 2e-4), 1e-4);
    const double d = airy_ai_prime(0.5) * airy_ai_prime(0.5) - 0.5 * airy_ai(0.5) * airy_ai(0.5);
    EXPECT_NEAR(airy_kernel(0.5, 0.5), d, 1e-14);
}

TEST(Kernels, HermiteKernelDiagonalIsDensity) {
    for (int k : {1, 3, 6}) {
        const auto phi = hermite_functions(k, 0.4);
        double sum = 0.0;
        for (int j = 0; j < k; ++j) sum += phi[static_cast<std::size_t>(j)] * phi[static_cast<std::size_t>(j)];
        EXPECT_NEAR(hermite_kernel(0.4, 0.4, k), sum, 1e-14);
        EXPECT_NEAR(hermite_kernel(0.4, 1.1, k), hermite_kernel(1.1, 0.4, k), 1e-15);
    }
}

TEST(FredholmDet, RankOneKernelIsExact) {
    // det(1 - c e^{-u} e^{-v}) on (0, inf) = 1 - c/2
    for (double c : {0.3, 1.0, 1.7}) {
        auto k = [c](double u, double v) { return c * std::exp(-u - v); };
        EXPECT_NEAR(fredholm_det(k, 0.0), 1.0 - c / 2.0, 1e-12);
    }
}

TEST(FredholmDet, AiryDeterminantMatchesIndependentValues) {
    auto k = [](double u, double v) { return airy_kernel(u, v); };
    for (const auto& [x, value] : oracle::kTracyWidomGue) EXPECT_NEAR(fredholm_det(k, x), value, 1e-11) << x;
}

TEST(FredholmDet, RefinementGateDetectsUnderresolvedKernel) {
    auto rough = [](double u, double v) { return 0.5 * std::cos(40.0 * u) * std::cos(40.0 * v) * std::exp(-u - v); };
    EXPECT_THROW(fredholm_det(rough, 0.0, 8), numerical_error);
}

TEST(Resolvent, RankOneInnerProduct) {
    const double c = 0.8;
    auto k = [c](double u, double v) { return c * std::exp(-u - v); };
    auto f = [](double u) { return std::exp(-u); };
    // <f, g> + <K f, g> / (1 - tr K)
    EXPECT_NEAR(resolvent_inner(k, 0.0, f, f), 0.5 + (c / 4.0) / (1.0 - c / 2.0), 1e-12);
}

TEST(Resolvent, RejectsNonContraction) {
    auto k = [](double u, double v) { return 3.0 * std::exp(-u - v); };
    auto f = [](double u) { return std::exp(-u); };
    EXPECT_THROW(resolvent_inner(k, 0.0, f, f), numerical_error);
}

TEST(KernelMatrix, SpectralRadiusOfAiryOperator) {
    const KernelMatrix km = detail::airy_kernel_matrix(QuadratureGrid::semi_infinite(-2.0, 64));
    EXPECT_GT(km.spectral_radius(), 0.0);
    EXPECT_LT(km.spectral_radius(), 1.0);
    EXPECT_NO_THROW(km.require_contraction());
}

TEST(RankCorrection, ZeroRankIsOne) {
    auto s = [](int, double) { return 0.0; };
    EXPECT_EQ(rank_correction_det(0.0, 0, s, s), 1.0);
    EXPECT_THROW(rank_correction_det(0.0, 9, s, s), precondition_error);
}

TEST(RankCorrection, ZeroFamiliesGiveOne) {
    auto s = [](int, double) { return 0.0; };
    EXPECT_NEAR(rank_correction_det(0.0, 2, s, s), 1.0, 1e-15);
}

TEST(FiniteKernel, OneByOneIsExponential) {
    const auto c = FiniteKernelConfig::defaults({1, 1, {}});
    for (double x : {0.1, 1.0, 3.0}) EXPECT_NEAR(finite_mn_det(c, x), 1.0 - std::exp(-x), 1e-10);
}

TEST(FiniteKernel, FiveByOneIsGamma) {
    const auto c = FiniteKernelConfig::defaults({5, 1, {}});
    for (double x : {0.3, 1.0, 2.0}) EXPECT_NEAR(finite_mn_det(c, x), oracle::gamma_cdf(5.0, 5.0, x), 1e-10);
}

TEST(FiniteKernel, SpikedOneByOneIsExponentialWithMeanSpike) {
    const auto c = FiniteKernelConfig::defaults({1, 1, {3.0}});
    for (double x : {0.5, 2.0, 6.0}) EXPECT_NEAR(finite_mn_det(c, x), 1.0 - std::exp(-x / 3.0), 1e-10);
}

TEST(FiniteKernel, IndependentOfQAndConjugation) {
    const auto base = FiniteKernelConfig::defaults({6, 3, {2.0}});
    const double ref = finite_mn_det(base, 2.0);
    for (double q : {0.1, 0.2, 0.4}) EXPECT_NEAR(finite_mn_det(base.with_q(q), 2.0), ref, 1e-10) << q;
    auto conj = base;
    conj.conjugation = 0.03;
    EXPECT_NEAR(finite_mn_det(conj, 2.0), ref, 1e-10);
}

TEST(FiniteKernel, CauchyFormMatchesFactorizedIntegral) {
    const auto c = FiniteKernelConfig::defaults({4, 2, {1.5}});
    const auto grid = QuadratureGrid::semi_infinite(0.5, 4, c.grid_scale);
    const auto values = detail::finite_kernel_values(c, grid, c.n_contour_nodes);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double f = finite_kernel_factorized(c, grid.nodes[i], grid.nodes[j], 200);
            EXPECT_NEAR(values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), f,
                        1e-8 * std::max(1.0, std::abs(f)));
        }
}

TEST(FiniteKernel, Preconditions) {
    const auto c = FiniteKernelConfig::defaults({3, 2, {}});
    EXPECT_THROW(finite_mn_det(c, 0.0), precondition_error);
    EXPECT_THROW(finite_mn_det(c, -1.0), precondition_error);
    auto bad = c;
    bad.q = 2.0;
    EXPECT_THROW(bad.validate(), precondition_error);
    bad = c;
    bad.conjugation = 100.0;
    EXPECT_THROW(bad.validate(), precondition_error);
    EXPECT_THROW(FiniteKernelConfig::defaults({3, 2, {1.0, 1.0, 1.0}}), precondition_error);
}

}  // namespace
