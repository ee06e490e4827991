#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "spiked/ensembles/model.hpp"
#include "spiked/ensembles/rng.hpp"
#include "spiked/ensembles/samplers.hpp"
#include "spiked/error.hpp"
#include "spiked/experiments/ecdf.hpp"
#include "spiked/experiments/experiment.hpp"

namespace {

using namespace spiked;

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

TEST(SpikedModel, Accessors) {
    const SpikedModel m{200, 50, {1.5, 4.0}};
    EXPECT_DOUBLE_EQ(m.gamma(), 2.0);
    EXPECT_EQ(m.rank(), 2);
    EXPECT_EQ(m.population(0), 1.5);
    EXPECT_EQ(m.population(7), 1.0);
    EXPECT_EQ(m.sorted_spikes(), (std::vector<double>{4.0, 1.5}));
    EXPECT_DOUBLE_EQ(m.pis()[1], 0.25);
    EXPECT_THROW((SpikedModel{0, 1, {}}).validate(), precondition_error);
    EXPECT_THROW((SpikedModel{3, 1, {2.0, 2.0}}).validate(), precondition_error);
    EXPECT_THROW((SpikedModel{3, 2, {0.0}}).validate(), precondition_error);
}

TEST(RngStream, DeterministicAndIndependentStreams) {
    RngStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
    EXPECT_NE(x, d.uniform());
}

TEST(RngStream, ExponentialMean) {
    RngStream r(7, 3);
    double s = 0.0;
    for (int i = 0; i < 100000; ++i) s += r.exponential(4.0);
    EXPECT_NEAR(s / 100000, 0.25, 0.0025);
}

TEST(Wishart, DescendingNonNegativeEigenvalues) {
    RngStream r(1, 0);
    const auto eig = sample_spiked_wishart({20, 10, {3.0}}, r);
    ASSERT_EQ(eig.size(), 10u);
    EXPECT_TRUE(std::is_sorted(eig.rbegin(), eig.rend()));
    EXPECT_GE(eig.back(), 0.0);
}

TEST(Wishart, TraceHasPopulationMean) {
    // E tr S = sum of population eigenvalues
    const SpikedModel m{6, 3, {4.0, 2.0}};
    double s = 0.0;
    const int n = 20000;
    for (int t = 0; t < n; ++t) {
        RngStream r(11, static_cast<std::uint64_t>(t));
        for (double e : sample_spiked_wishart(m, r)) s += e;
    }
    EXPECT_NEAR(s / n, 7.0, 0.07);
}

TEST(Wishart, RequiresMAtLeastN) {
    RngStream r(1, 0);
    EXPECT_THROW(sample_spiked_wishart({3, 5, {}}, r), precondition_error);
}

TEST(Lpp, SingleRowIsGammaWithSpikeMean) {
    const auto v = draw_many(SamplerKind::Lpp, {10, 1, {3.0}}, 20000, 5, 2);
    EXPECT_NEAR(mean_of(v), 3.0, 0.03);
}

TEST(Lpp, SingleSiteIsExponential) {
    const auto v = draw_many(SamplerKind::Lpp, {1, 1, {2.0}}, 100000, 6, 2);
    EXPECT_NEAR(mean_of(v), 2.0, 0.04);
}

TEST(Lpp, MatchesWishartInDistribution) {
    const SpikedModel m{8, 4, {}};
    const auto w = draw_many(SamplerKind::Wishart, m, 10000, 9, 2);
    const auto l = draw_many(SamplerKind::Lpp, m, 10000, 9, 2, kSecondSamplerStream);
    EXPECT_LE(ks_two_sample(w, l), 0.02);
}

TEST(Queue, BitIdenticalToLpp) {
    for (const SpikedModel& m : {SpikedModel{5, 9, {2.0}}, SpikedModel{12, 3, {}}, SpikedModel{1, 1, {0.5}}})
        for (std::uint64_t t = 0; t < 50; ++t) {
            RngStream a(77, t), b(77, t);
            EXPECT_EQ(queue_exit_time(m, a), lpp_last_passage(m, b));
        }
}

TEST(Queue, SingleTellerIsGamma) {
    const auto v = draw_many(SamplerKind::Queue, {10, 1, {3.0}}, 20000, 8, 2);
    EXPECT_NEAR(mean_of(v), 3.0, 0.03);
}

TEST(Queue, ScaledExitTimeGrowsWithCustomers) {
    // M E(M, N) is the unnormalized exit time with unit-mean services
    double prev = 0.0;
    for (int M : {2, 4, 8, 16}) {
        const double scaled = M * mean_of(draw_many(SamplerKind::Queue, {M, 3, {}}, 4000, 12, 2));
        EXPECT_GT(scaled, prev) << M;
        prev = scaled;
    }
}

TEST(Dwell, BoundsAndLimits) {
    RngStream r(3, 0);
    const double d = lpp_column_dwell({50, 40, {2.0}}, r);
    EXPECT_GE(d, 1.0 / 50);
    EXPECT_LE(d, 1.0);
    double s = 0.0;
    for (int t = 0; t < 200; ++t) {
        RngStream q(21, static_cast<std::uint64_t>(t));
        s += lpp_column_dwell({200, 200, {50.0}}, q);
    }
    EXPECT_GE(s / 200, 0.95);
    RngStream e(1, 0);
    EXPECT_THROW(lpp_column_dwell({5, 5, {}}, e), precondition_error);
}

TEST(DrawMany, IndependentOfThreadCount) {
    const SpikedModel m{20, 10, {2.5}};
    for (SamplerKind s : {SamplerKind::Wishart, SamplerKind::Lpp})
        EXPECT_EQ(draw_many(s, m, 33, 4, 1), draw_many(s, m, 33, 4, 4));
}

}  // namespace
