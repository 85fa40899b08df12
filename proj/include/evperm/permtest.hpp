#pragma once

// Permutation test for a distributional change between two subsamples.
//
// The observed statistic is compared with the ceil(M (1 - alpha))-th smallest
// value of the statistic recomputed over a set of M relabelings of the pooled
// data: either all N! permutations, or the identity plus m i.i.d. uniform
// permutations. Ties at the critical value are broken by an independent
// Bernoulli draw with probability
//
//     phat = (M alpha - M+) / M0
//
// where M+ and M0 count permuted statistics strictly above and equal to the
// critical value, which makes the test exact under exchangeability.

#include "evperm/randgen.hpp"
#include "evperm/stats_core.hpp"

#include <cstdint>
#include <vector>

namespace evperm {

struct PermutationScheme {
    enum class Mode { full, random_subset };

    static constexpr std::uint64_t kDefaultEnumerationCap = 40'320;  // 8!

    Mode mode = Mode::random_subset;
    // Number of random permutations in addition to the identity.
    std::size_t m = 999;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;

    static PermutationScheme full(std::uint64_t cap = kDefaultEnumerationCap) { return {Mode::full, 0, cap}; }
    static PermutationScheme random_subset(std::size_t m) { return {Mode::random_subset, m, kDefaultEnumerationCap}; }

    // Size of the permutation set for a pooled sample of n observations.
    // Throws CapacityError when full enumeration exceeds the cap and
    // InvalidInput for a random subset with m == 0.
    std::uint64_t total(std::size_t n) const;
};

struct TestOutcome {
    double statistic = 0.0;
    double critical_value = 0.0;
    std::size_t m_total = 0;
    std::size_t m_plus = 0;
    std::size_t m_zero = 0;
    // Tie-breaking probability; defined whatever the statistic.
    double phat = 0.0;
    // 1 above the critical value, 0 below, phat on a tie (zero for the
    // non-randomized test).
    double phi = 0.0;
    // Realized decision: Bernoulli(phi) outcome for the randomized test.
    bool rejected = false;
    bool rejected_nonrandomized = false;
    // (1/M) #{permuted statistic >= observed}; the identity is always counted.
    double p_value = 1.0;
    bool randomized = true;
};

// All M permuted statistics, identity first in random-subset mode.
std::vector<double> permutation_distribution(const SplitSample& sample, const PermutationScheme& scheme,
                                             SeededStream& stream);

// Permuted statistics in exact scaled form (see PooledRanks). Same draws and
// order as permutation_distribution.
std::vector<std::uint64_t> scaled_permutation_distribution(const PooledRanks& ranks, const PermutationScheme& scheme,
                                                           SeededStream& stream);

// Position (1-based) of the critical value in the ascending list: ceil(M (1 - alpha)).
std::size_t critical_index(std::size_t m_total, double alpha);

// The randomized test draws its tie-breaking uniform from `stream` after every
// permutation draw, whether or not a tie occurs.
TestOutcome run_test(const SplitSample& sample, double alpha, const PermutationScheme& scheme, SeededStream& stream,
                     bool randomized = true);

TestOutcome run_test_nonrandomized(const SplitSample& sample, double alpha, const PermutationScheme& scheme,
                                   SeededStream& stream);

}  // namespace evperm
