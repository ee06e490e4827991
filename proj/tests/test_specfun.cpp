#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <gtest/gtest.h>

#include "spiked/error.hpp"
#include "spiked/specfun/airy.hpp"
#include "spiked/specfun/airy_family.hpp"
#include "spiked/specfun/hermite.hpp"
#include "spiked/specfun/painleve.hpp"
#include "spiked/verify/oracles.hpp"

namespace {

using namespace spiked;

TEST(Airy, MatchesMaclaurinSeries) {
    for (double x = -3.0; x <= 3.0; x += 0.25) EXPECT_NEAR(airy_ai(x), oracle::airy_maclaurin(x), 1e-13) << x;
}

TEST(Airy, KnownValues) {
    EXPECT_NEAR(airy_ai(0.0), 0.355028053887817239, 1e-15);
    EXPECT_NEAR(airy_ai_prime(0.0), -0.258819403792806798, 1e-15);
    EXPECT_NEAR(airy_ai(10.0) / 1.1047532552898685933550205658e-10, 1.0, 1e-12);
}

TEST(Airy, DerivativesSatisfyAiryEquation) {
    for (double x : {-5.0, -1.0, 0.0, 0.7, 3.0}) {
        EXPECT_NEAR(airy_ai_derivative(2, x), x * airy_ai(x), 1e-13);
        // Ai''' = Ai + x Ai'
        EXPECT_NEAR(airy_ai_derivative(3, x), airy_ai(x) + x * airy_ai_prime(x), 1e-13);
    }
}

TEST(AiryFamily, SOneIsComplementaryTailIntegral) {
    for (double u : {-4.0, 0.0, 2.5}) EXPECT_NEAR(s_m(u, 1), 1.0 - airy_ai_tail_integral(u), 1e-13);
}

TEST(AiryFamily, FrozenClosedFormValues) {
    for (const auto& v : oracle::kSFamily) EXPECT_NEAR(s_m(v.u, v.m), v.value, 1e-10) << v.u << " m=" << v.m;
}

TEST(AiryFamily, TIsAiryDerivative) {
    for (double v : {-2.0, 0.0, 1.5})
        for (int m = 1; m <= 4; ++m) {
            const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
            EXPECT_NEAR(t_m(v, m), sign * airy_ai_derivative(m - 1, v), 1e-13);
        }
}

TEST(AiryFamily, DerivativeRelation) {
    // d/du s^(m) = s^(m-1), s^(0) = Ai
    const double h = 1e-4;
    for (double u : {-2.0, 0.3, 2.0})
        for (int m = 1; m <= 4; ++m) {
            const double d = (s_m(u + h, m) - s_m(u - h, m)) / (2 * h);
            const double prev = m == 1 ? airy_ai(u) : s_m(u, m - 1);
            EXPECT_NEAR(d, prev, 1e-7);
        }
}

TEST(AiryFamily, RejectsBadIndex) {
    EXPECT_THROW(s_m(0.0, 0), precondition_error);
    EXPECT_THROW(s_m(0.0, 9), precondition_error);
    EXPECT_THROW(t_m(0.0, 0), precondition_error);
}

TEST(AiryFamilyW, ZeroParametersReduceToPlainFamily) {
    const std::vector<double> w = {0.0, 0.0, 0.0};
    const std::span<const double> ws(w);
    for (double u : {-3.0, 0.0, 1.0})
        for (int m = 1; m <= 3; ++m) {
            EXPECT_NEAR(s_m_w(u, m, ws.first(m)), s_m(u, m), 1e-10);
            EXPECT_NEAR(t_m_w(u, m, ws.first(m - 1), ContourSpec{}), t_m(u, m), 1e-10);
        }
}

TEST(AiryFamilyW, OneParameterAtZero) {
    for (const auto& [w, value] : oracle::kSOneParameterAtZero) {
        const std::vector<double> ws = {w};
        EXPECT_NEAR(s_m_w(0.0, 1, ws), value, 1e-10) << w;
    }
    const std::vector<double> one = {1.0};
    EXPECT_NEAR(t_m_w(0.0, 2, one, ContourSpec{}), oracle::kTOneParameterAtZero, 1e-10);
    EXPECT_NEAR(t_m_w_exact(0.0, 2, one), oracle::kTOneParameterAtZero, 1e-14);
    EXPECT_NEAR(t_m_w_exact(0.0, 1, {}), airy_ai(0.0), 1e-14);
}

TEST(AiryFamilyW, ContourAgreesWithExactT) {
    const std::vector<double> w = {0.5, -0.3, 1.2};
    const std::span<const double> ws(w);
    for (double v : {-2.0, 0.0, 1.0})
        for (int m = 1; m <= 4; ++m)
            EXPECT_NEAR(t_m_w(v, m, ws.first(m - 1), ContourSpec{}), t_m_w_exact(v, m, ws.first(m - 1)), 1e-10);
}

TEST(AiryFamilyW, WalkerMatchesContourBeyondSwitch) {
    const std::vector<double> w = {1.0, -0.5};
    SFamilyWalker walker(2, w, ContourSpec::below_poles(w));
    const double sw = walker.switch_point();
    for (double u : {sw - 1.0, sw + 1.0, sw + 3.0}) {
        const auto fast = walker(u);
        const auto ref = s_family_w(u, 2, w, ContourSpec::below_poles(w).refined());
        for (int m = 0; m < 2; ++m) EXPECT_NEAR(fast[m], ref[m], 1e-9 * std::max(1.0, std::abs(ref[m]))) << u;
    }
    EXPECT_THROW(walker(sw - 2.0), precondition_error);
}

TEST(Hermite, Orthonormality) {
    const auto [x, w] = gauss_legendre(200, -20.0, 20.0);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                sum += w[i] * hermite_orthonormal(a, x[i]) * hermite_orthonormal(b, x[i]) * std::exp(-0.5 * x[i] * x[i]);
            EXPECT_NEAR(sum, a == b ? 1.0 : 0.0, 1e-12) << a << "," << b;
        }
}

TEST(Hermite, VectorMatchesSingle) {
    const auto v = hermite_functions(5, 0.7);
    ASSERT_EQ(v.size(), 6u);
    for (int j = 0; j <= 5; ++j)
        EXPECT_NEAR(v[static_cast<std::size_t>(j)], hermite_orthonormal(j, 0.7) * std::exp(-0.7 * 0.7 / 4.0), 1e-15);
    EXPECT_NEAR(hermite_orthonormal(1, 1.3), 1.3 / std::pow(2.0 * std::numbers::pi, 0.25), 1e-15);
    EXPECT_THROW(hermite_functions(-1, 0.0), precondition_error);
}

TEST(Painleve, MatchesLiteratureAtZero) {
    EXPECT_NEAR(-default_hastings_mcleod().value(0.0), oracle::kHastingsMcLeodAtZero, 1e-9);
}

TEST(Painleve, MatchesShootingOracle) {
    const auto& u = default_hastings_mcleod();
    for (double x : {-2.0, 0.0, 2.0, 5.0}) EXPECT_NEAR(u.value(x), oracle::hastings_mcleod_shoot(x), 1e-8) << x;
}

TEST(Painleve, ResidualAndAsymptotics) {
    const auto& u = default_hastings_mcleod();
    EXPECT_LE(u.max_interior_residual(), 1e-8);
    EXPECT_NEAR(u.value(8.0), -airy_ai(8.0), 1e-14);
    EXPECT_NEAR(u.value(-12.0) / -std::sqrt(6.0), 1.0, 1e-2);
    EXPECT_NEAR(u.value(-8.0) / -2.0, 1.0, 1e-2);
    EXPECT_NEAR(u.derivative(8.0), -airy_ai_prime(8.0), 1e-10);
}

TEST(Painleve, RejectsBadGrid) {
    EXPECT_THROW(hastings_mcleod(2.0, 1.0, 100), precondition_error);
}

}  // namespace
