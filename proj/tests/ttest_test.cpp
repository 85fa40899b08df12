#include "evperm/error.hpp"
#include "evperm/randgen.hpp"
#include "evperm/ttest.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace evperm {
namespace {

TEST(SpotVariances, MeanOfSquares) {
    const auto [pre, post] = spot_variances(SplitSample({1, -1}, {2, -2}));
    EXPECT_EQ(pre, 1.0);
    EXPECT_EQ(post, 4.0);

    const auto [a, b] = spot_variances(SplitSample({0.3, 1.7, -2.0}, {0.3, 1.7, -2.0}));
    EXPECT_EQ(a, b);

    EXPECT_EQ(spot_variances(SplitSample({0, 0, 0}, {1, 2, 3})).first, 0.0);
}

TEST(TTest, IdenticalWindowsGiveZero) {
    const TTestOutcome r = t_test(SplitSample({0.5, -1.5, 2.0}, {0.5, -1.5, 2.0}), 0.05);
    EXPECT_EQ(r.tstat, 0.0);
    EXPECT_FALSE(r.rejected);
}

TEST(TTest, HandComputedStatistic) {
    // k = 4, s2_pre = 1, s2_post = 2: 2 * 1 / sqrt(2*4 + 2*1) = 2 / sqrt(10).
    const TTestOutcome r = t_test(SplitSample({1, -1, 1, -1}, {std::sqrt(2.0), -std::sqrt(2.0), std::sqrt(2.0), -std::sqrt(2.0)}), 0.05);
    EXPECT_NEAR(r.sigma2_pre, 1.0, 1e-15);
    EXPECT_NEAR(r.sigma2_post, 2.0, 1e-15);
    EXPECT_NEAR(r.tstat, 0.63245553203367588, 1e-12);
    EXPECT_NEAR(r.critical, 1.959963984540054, 1e-9);
    EXPECT_FALSE(r.rejected);
}

TEST(TTest, RejectsLargeVarianceJump) {
    const TTestOutcome r = t_test(SplitSample({0.1, -0.1, 0.1, -0.1, 0.1, -0.1, 0.1, -0.1, 0.1},
                                              {3, -3, 3, -3, 3, -3, 3, -3, 3}),
                                  0.05);
    EXPECT_GT(r.tstat, r.critical);
    EXPECT_TRUE(r.rejected);
}

TEST(TTest, OneZeroSpotVarianceIsFinite) {
    const TTestOutcome r = t_test(SplitSample({0, 0}, {1, 1}), 0.05);
    EXPECT_NEAR(r.tstat, std::sqrt(2.0) / std::sqrt(2.0), 1e-15);
}

TEST(TTest, Errors) {
    EXPECT_THROW(t_test(SplitSample({0, 0}, {0, 0}), 0.05), DegenerateStatistic);
    EXPECT_THROW(t_test(SplitSample({1, 2}, {1, 2, 3}), 0.05), InvalidInput);
    EXPECT_THROW(t_test(SplitSample({1, 2}, {1, 2}), 0.0), InvalidInput);
}

TEST(TTest, AntisymmetryAndScaleEquivariance) {
    SeededStream s(3);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> pre(10);
        std::vector<double> post(10);
        for (auto& x : pre) x = sample_normal(s);
        for (auto& x : post) x = 2.0 * sample_normal(s);
        const SplitSample sample(pre, post);
        const double t = t_test(sample, 0.05).tstat;
        EXPECT_EQ(t_test(sample.swapped(), 0.05).tstat, -t);

        const double lambda = rep % 2 ? -3.5 : 0.25;  // powers of two keep scaling exact for 0.25
        for (auto& x : pre) x *= lambda;
        for (auto& x : post) x *= lambda;
        EXPECT_NEAR(t_test(SplitSample(pre, post), 0.05).tstat, t, 1e-12 * (1 + std::fabs(t)));
    }
}

TEST(TTest, SizeUnderIidNormalDataAtLargeWindow) {
    constexpr int trials = 4000;
    SeededStream s(4);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> pre(90);
        std::vector<double> post(90);
        for (auto& x : pre) x = sample_normal(s);
        for (auto& x : post) x = sample_normal(s);
        hits += t_test(SplitSample(pre, post), 0.05).rejected;
    }
    EXPECT_NEAR(hits / static_cast<double>(trials), 0.048, 0.02);
}

TEST(NormalQuantile, KnownValues) {
    EXPECT_EQ(normal_quantile(0.5), 0.0);
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
    EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-9);
    EXPECT_THROW(normal_quantile(0.0), InvalidInput);
    EXPECT_THROW(normal_quantile(1.0), InvalidInput);
    EXPECT_THROW(normal_quantile(-0.2), InvalidInput);
}

TEST(NormalQuantile, AgreesWithQuadratureOfDensity) {
    const double q = normal_quantile(0.975);
    EXPECT_NEAR(oracle::normal_cdf_quadrature(q), 0.975, 1e-10);
}

TEST(NormalQuantile, RoundTrip) {
    for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-8);
        EXPECT_NEAR(oracle::normal_cdf_quadrature(normal_quantile(p)), p, 1e-8);
    }
    for (double p : {1e-10, 1e-6, 0.001, 0.999, 1 - 1e-6}) {
        EXPECT_NEAR(normal_cdf(normal_quantile(p)) / p, 1.0, 1e-8);
    }
}

}  // namespace
}  // namespace evperm
