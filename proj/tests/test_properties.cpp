// Randomized property checks; every generator is seeded.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "spiked/distributions/laws.hpp"
#include "spiked/distributions/table.hpp"
#include "spiked/ensembles/rng.hpp"
#include "spiked/ensembles/samplers.hpp"
#include "spiked/experiments/ecdf.hpp"
#include "spiked/experiments/phase.hpp"
#include "spiked/fredholm/determinant.hpp"
#include "spiked/fredholm/kernels.hpp"
#include "spiked/specfun/airy.hpp"
#include "spiked/specfun/airy_family.hpp"
#include "spiked/specfun/painleve.hpp"

namespace {

using namespace spiked;

std::vector<double> sorted_uniform(std::mt19937_64& g, int n, double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = d(g);
    std::sort(v.begin(), v.end());
    return v;
}

template <class F>
void expect_cdf_shape(F&& f, const std::vector<double>& xs, double slack) {
    double prev = -1.0;
    for (double x : xs) {
        const double v = f(x);
        EXPECT_GE(v, -1e-6) << x;
        EXPECT_LE(v, 1.0 + 1e-6) << x;
        EXPECT_GE(v, prev - slack) << x;
        prev = v;
    }
}

TEST(Properties, SFamilyIteratedDerivativeIsAiry) {
    // chained central differences: d/du s^(m) = s^(m-1)
    const double h = 1e-3;
    for (int m = 1; m <= kMaxFamilyIndex; ++m)
        for (double u = -10.0; u <= 10.0; u += 2.5) {
            const double d = (s_m(u + h, m) - s_m(u - h, m)) / (2 * h);
            const double prev = m == 1 ? airy_ai(u) : s_m(u, m - 1);
            EXPECT_NEAR(d, prev, 1e-4 * std::max(1.0, std::abs(prev))) << "m=" << m << " u=" << u;
        }
    // direct m-th difference for low orders
    const double H = 0.02;
    for (double u = -4.0; u <= 4.0; u += 2.0) {
        const double d2 = (s_m(u + H, 2) - 2 * s_m(u, 2) + s_m(u - H, 2)) / (H * H);
        EXPECT_NEAR(d2, airy_ai(u), 1e-4);
    }
}

TEST(Properties, ContourResultsAreReal) {
    std::mt19937_64 g(101);
    std::uniform_real_distribution<double> wd(-0.8, 2.0), ud(-6.0, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + trial % 4;
        std::vector<double> w(static_cast<std::size_t>(m));
        for (auto& x : w) x = wd(g);
        const double u = ud(g);
        const auto c = ContourSpec::below_poles(w);
        EXPECT_LE(std::abs(s_m_w_raw(u, w, c).imag()), 1e-8);
        EXPECT_LE(std::abs(t_m_w_raw(u, w, ContourSpec{}).imag()), 1e-8);
    }
}

TEST(Properties, HastingsMcLeodNegativeWithDecreasingMagnitude) {
    const auto& u = default_hastings_mcleod();
    for (std::size_t i = 0; i < u.u_values.size(); ++i) {
        EXPECT_LT(u.u_values[i], 0.0);
        if (i > 0) {
            EXPECT_LT(std::abs(u.u_values[i]), std::abs(u.u_values[i - 1])) << u.grid[i];
        }
    }
}

TEST(Properties, AiryDecayAndBoundedOscillation) {
    double prev = airy_ai(1.0);
    for (double x = 1.1; x <= 20.0; x += 0.1) {
        const double v = airy_ai(x);
        EXPECT_LT(v, prev);
        EXPECT_GT(v, 0.0);
        prev = v;
    }
    for (double x = -10.0; x <= 0.0; x += 0.05) EXPECT_LE(std::abs(airy_ai(x)), 0.54);
}

TEST(Properties, AiryDeterminantMonotoneInDomain) {
    std::mt19937_64 g(7);
    auto k = [](double u, double v) { return airy_kernel(u, v); };
    const auto xs = sorted_uniform(g, 15, -8.0, 4.0);
    expect_cdf_shape([&](double x) { return fredholm_det(k, x); }, xs, 0.0);
}

TEST(Properties, EvaluatorsAreMonotoneCdfs) {
    std::mt19937_64 g(8);
    const auto xs = sorted_uniform(g, 12, -7.0, 3.0);
    expect_cdf_shape([](double x) { return f_gue(x); }, xs, 1e-8);
    expect_cdf_shape([](double x) { return f_k(x, 1); }, xs, 1e-7);
    expect_cdf_shape([](double x) { return f_k(x, 3); }, xs, 1e-7);
    const std::vector<double> w = {1.5, -0.5};
    expect_cdf_shape([&](double x) { return f_k_interp(x, 2, w); }, xs, 1e-7);
    const auto gx = sorted_uniform(g, 12, -6.0, 8.0);
    for (int k : {1, 2, 4, 9}) expect_cdf_shape([&](double x) { return g_k(x, k); }, gx, 1e-8);
}

TEST(Properties, FkTendsToOneOnTheRight) {
    for (int k : {2, 3}) EXPECT_NEAR(f_k(6.0, k), 1.0, 1e-4) << k;
    auto s = [](int m, double u) { return s_m(u, m); };
    auto t = [](int m, double u) { return t_m(u, m); };
    EXPECT_NEAR(rank_correction_det(10.0, 1, s, t), 1.0, 1e-6);
}

TEST(Properties, FkRightTailMatchesLeadingOrder) {
    // for large x the resolvent is negligible: 1 - F_k ~ 1 - det(delta - int_x^inf s^(m) t^(n))
    for (double x : {6.0, 8.0})
        for (int k = 1; k <= 3; ++k) {
            Eigen::MatrixXd g(k, k);
            for (int m = 1; m <= k; ++m)
                for (int n = 1; n <= k; ++n)
                    g(m - 1, n - 1) = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                        [&](double y) { return s_m(y, m) * t_m(y, n); }, x, 30.0, 10, 1e-14);
            const double tail = 1.0 - (Eigen::MatrixXd::Identity(k, k) - g).determinant();
            EXPECT_NEAR(1.0 - f_k(x, k), tail, 1e-3 * tail) << "x=" << x << " k=" << k;
        }
}

TEST(Properties, GkStochasticallyIncreasingInK) {
    for (double x : {-1.0, 0.5, 2.0, 4.0})
        for (int k = 1; k < 6; ++k) EXPECT_LE(g_k(x, k + 1), g_k(x, k) + 1e-12);
}

TEST(Properties, GOneIsNormalOnWideRange) {
    for (double x = -6.0; x <= 6.0; x += 0.25) EXPECT_NEAR(g_k(x, 1), 0.5 * std::erfc(-x / std::sqrt(2.0)), 1e-8);
}

TEST(Properties, FiniteCdfMonotoneAndSaturates) {
    std::mt19937_64 g(9);
    const SpikedModel m{6, 3, {2.5}};
    const auto xs = sorted_uniform(g, 10, 0.05, 6.0);
    expect_cdf_shape([&](double x) { return finite_cdf(m, x); }, xs, 1e-8);
    // mean of lambda_1 is below the trace mean 4.5
    EXPECT_NEAR(finite_cdf(m, 45.0), 1.0, 1e-8);
}

TEST(Properties, FiniteCdfSymmetricInSpikes) {
    const double a = finite_cdf({7, 4, {3.0, 1.5, 0.7}}, 2.5);
    EXPECT_NEAR(finite_cdf({7, 4, {0.7, 3.0, 1.5}}, 2.5), a, 1e-10);
    EXPECT_NEAR(finite_cdf({7, 4, {1.5, 0.7, 3.0}}, 2.5), a, 1e-10);
}

TEST(Properties, FiniteCdfDecreasesWithSpike) {
    double prev = 1.0;
    for (double l : {1.0, 1.5, 2.5, 4.0}) {
        const double v = finite_cdf({5, 3, {l}}, 3.0);
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(Properties, PhaseClassifyPermutationInvariant) {
    std::mt19937_64 g(10);
    std::uniform_real_distribution<double> d(0.3, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> s = {d(g), d(g), d(g)};
        if (trial % 5 == 0) s[2] = s[0];
        if (trial % 7 == 0) s[1] = 2.0;
        const auto ref = phase_classify({100, 100, s});
        std::sort(s.begin(), s.end());
        do {
            EXPECT_EQ(phase_classify({100, 100, s}), ref);
        } while (std::next_permutation(s.begin(), s.end()));
    }
}

TEST(Properties, ScaleInverseRoundTrip) {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> d(0.1, 20.0), sp(0.5, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const SpikedModel m{400, 100, {sp(g)}};
        const auto r = phase_classify(m);
        const double l = d(g);
        EXPECT_NEAR(scale_sample(l, m, r).unscaled(), l, 1e-12 * std::max(1.0, l));
    }
}

TEST(Properties, TwoSampleKsSymmetric) {
    RngStream r(4, 4);
    std::vector<double> a(300), b(200);
    for (auto& x : a) x = r.normal();
    for (auto& x : b) x = r.normal() + 0.1;
    EXPECT_EQ(ks_two_sample(a, b), ks_two_sample(b, a));
}

TEST(Properties, SamplersReproducibleAcrossRuns) {
    for (std::uint64_t t = 0; t < 10; ++t) {
        RngStream a(5, t), b(5, t);
        EXPECT_EQ(sample_spiked_wishart({12, 6, {2.0, 2.0}}, a), sample_spiked_wishart({12, 6, {2.0, 2.0}}, b));
    }
}

TEST(Properties, TableCdfIsMonotone) {
    const auto table = DistributionTable::build(LawSpec::fk(2), DistributionTable::linspace(-10.0, 6.0, 33));
    double prev = 0.0;
    for (double x = -11.0; x <= 7.0; x += 0.01) {
        const double v = table.cdf(x);
        EXPECT_GE(v, prev - 1e-7);
        prev = v;
    }
}

}  // namespace
