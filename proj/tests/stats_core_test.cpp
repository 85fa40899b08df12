#include "evperm/error.hpp"
#include "evperm/randgen.hpp"
#include "evperm/stats_core.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

namespace evperm {
namespace {

std::vector<double> draw(SeededStream& s, std::size_t n, bool with_ties) {
    std::vector<double> v(n);
    for (auto& x : v) x = with_ties ? static_cast<double>(s.bounded(4)) : sample_normal(s);
    return v;
}

TEST(EcdfEval, CountsWithWeakInequality) {
    EXPECT_DOUBLE_EQ(ecdf_eval(std::vector<double>{1, 2, 3}, 2.0), 2.0 / 3.0);
    EXPECT_EQ(ecdf_eval(std::vector<double>{5}, 4.999), 0.0);
    EXPECT_EQ(ecdf_eval(std::vector<double>{5}, 5.0), 1.0);
    EXPECT_DOUBLE_EQ(ecdf_eval(std::vector<double>{0, 0, 1}, 0.0), 2.0 / 3.0);
}

TEST(EcdfEval, EmptySampleIsInvalid) {
    EXPECT_THROW(ecdf_eval(std::vector<double>{}, 0.0), InvalidInput);
}

TEST(SplitSample, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(SplitSample({}, {1.0}), InvalidInput);
    EXPECT_THROW(SplitSample({1.0}, {}), InvalidInput);
    EXPECT_THROW(SplitSample({std::nan("")}, {1.0}), InvalidInput);
    EXPECT_THROW(SplitSample({1.0}, {std::numeric_limits<double>::infinity()}), InvalidInput);
    EXPECT_NO_THROW(SplitSample({1.0, 2.0}, {3.0}));
}

TEST(CvmStatistic, IdenticalSubsamplesGiveZero) {
    EXPECT_EQ(cvm_statistic(SplitSample({1, 2}, {1, 2})), 0.0);
}

TEST(CvmStatistic, SeparatedSubsamples) {
    // Squared ECDF gaps at 1, 2, 3, 4: 0.25, 1, 0.25, 0 -> 1.5 / 4.
    EXPECT_EQ(cvm_statistic(SplitSample({1, 2}, {3, 4})), 0.375);
}

TEST(CvmStatistic, MatchesDirectDefinitionOnRandomSamples) {
    SeededStream s(11);
    for (int rep = 0; rep < 200; ++rep) {
        const bool ties = rep % 2 == 1;
        const auto pre = draw(s, 3, ties);
        const auto post = draw(s, 3, ties);
        EXPECT_NEAR(cvm_statistic(SplitSample(pre, post)), oracle::cvm(pre, post), 1e-12);
    }
}

TEST(CvmStatistic, UnequalSizesUsePooledNormalization) {
    SeededStream s(12);
    for (int rep = 0; rep < 100; ++rep) {
        const auto pre = draw(s, 2 + rep % 5, rep % 3 == 0);
        const auto post = draw(s, 1 + rep % 7, rep % 3 == 0);
        EXPECT_NEAR(cvm_statistic(SplitSample(pre, post)), oracle::cvm(pre, post), 1e-12);
    }
}

TEST(CvmStatistic, ConstantSampleIsZero) {
    EXPECT_EQ(cvm_statistic(SplitSample({3, 3, 3}, {3, 3, 3})), 0.0);
}

TEST(CvmStatistic, BoundedByOne) {
    SeededStream s(13);
    for (int rep = 0; rep < 500; ++rep) {
        const auto pre = draw(s, 1 + s.bounded(10), rep % 2 == 0);
        const auto post = draw(s, 1 + s.bounded(10), rep % 2 == 0);
        const double t = cvm_statistic(SplitSample(pre, post));
        EXPECT_GE(t, 0.0);
        EXPECT_LE(t, 1.0);
    }
}

TEST(CvmStatistic, InvariantUnderStrictlyIncreasingMaps) {
    SeededStream s(14);
    for (int rep = 0; rep < 200; ++rep) {
        const auto pre = draw(s, 8, rep % 2 == 0);
        const auto post = draw(s, 6, rep % 2 == 0);
        auto g = [](double x) { return std::exp(x) * 3.0 + 7.0; };
        std::vector<double> gpre(pre.size());
        std::vector<double> gpost(post.size());
        std::transform(pre.begin(), pre.end(), gpre.begin(), g);
        std::transform(post.begin(), post.end(), gpost.begin(), g);
        EXPECT_EQ(cvm_statistic(SplitSample(pre, post)), cvm_statistic(SplitSample(gpre, gpost)));
    }
}

TEST(CvmStatistic, SymmetricInTheTwoGroups) {
    SeededStream s(15);
    for (int rep = 0; rep < 200; ++rep) {
        const SplitSample sample(draw(s, 5, rep % 2 == 0), draw(s, 9, rep % 2 == 0));
        EXPECT_EQ(cvm_statistic(sample), cvm_statistic(sample.swapped()));
    }
}

TEST(PooledRanks, SortpermSortsAndMembershipCounts) {
    const PooledRanks pr(SplitSample({3, 1, 2}, {0, 5}));
    ASSERT_EQ(pr.size(), 5u);
    for (std::size_t r = 0; r + 1 < pr.size(); ++r) {
        EXPECT_LE(pr.pooled()[pr.sortperm()[r]], pr.pooled()[pr.sortperm()[r + 1]]);
    }
    EXPECT_EQ(std::count(pr.membership().begin(), pr.membership().end(), Group::pre), 3);
    EXPECT_EQ(std::count(pr.membership().begin(), pr.membership().end(), Group::post), 2);
}

TEST(CvmStatisticPermuted, IdentityAndSwapReproduceObserved) {
    const SplitSample sample({0.3, -1.2, 2.5, 0.0}, {1.1, 4.0, -0.4, 0.9});
    const PooledRanks pr(sample);
    std::vector<Group> id(pr.membership().begin(), pr.membership().end());
    EXPECT_EQ(cvm_statistic_permuted(pr, id), cvm_statistic(sample));

    std::vector<Group> flipped(id);
    for (auto& g : flipped) g = g == Group::pre ? Group::post : Group::pre;
    EXPECT_EQ(cvm_statistic_permuted(pr, flipped), cvm_statistic(sample));
}

TEST(CvmStatisticPermuted, RejectsWrongLabelCounts) {
    const PooledRanks pr(SplitSample({1, 2}, {3, 4}));
    EXPECT_THROW(cvm_statistic_permuted(pr, std::vector<Group>{Group::pre, Group::pre, Group::pre, Group::post}),
                 InvalidInput);
    EXPECT_THROW(cvm_statistic_permuted(pr, std::vector<Group>{Group::pre, Group::post}), InvalidInput);
}

// Every labeling of every pooled sample with k1 + k2 <= 12 matches the O(N^2) definition.
TEST(CvmStatisticPermuted, ExhaustiveAgreementWithNaiveOracle) {
    SeededStream s(16);
    std::size_t checked = 0;
    for (std::size_t n = 2; n <= 12; ++n) {
        for (std::size_t k1 = 1; k1 < n; ++k1) {
            const bool ties = (n + k1) % 2 == 0;
            const std::vector<double> pre = draw(s, k1, ties);
            const std::vector<double> post = draw(s, n - k1, ties);
            const PooledRanks pr(SplitSample(pre, post));
            std::vector<double> pooled(pre);
            pooled.insert(pooled.end(), post.begin(), post.end());

            // Enumerate subsets of size k1 through bitmasks.
            for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (static_cast<std::size_t>(std::popcount(mask)) != k1) continue;
                std::vector<Group> assignment(n);
                std::vector<bool> is_pre(n);
                for (std::size_t i = 0; i < n; ++i) {
                    is_pre[i] = (mask >> i) & 1u;
                    assignment[i] = is_pre[i] ? Group::pre : Group::post;
                }
                ASSERT_NEAR(cvm_statistic_permuted(pr, assignment), oracle::cvm_labeled(pooled, is_pre), 1e-12);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 4000u);
}

}  // namespace
}  // namespace evperm
