#include "evperm/permtest.hpp"

#include "evperm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evperm {

std::uint64_t PermutationScheme::total(std::size_t n) const {
    if (mode == Mode::random_subset) {
        if (m == 0) throw InvalidInput("random permutation subset needs m >= 1");
        return static_cast<std::uint64_t>(m) + 1;
    }
    std::uint64_t count = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (count > enumeration_cap / i) {
            throw CapacityError("full enumeration of " + std::to_string(n) + "! permutations exceeds the cap of " +
                                std::to_string(enumeration_cap) + "; use a random permutation subset");
        }
        count *= i;
    }
    if (count > enumeration_cap) {
        throw CapacityError("full enumeration exceeds the cap; use a random permutation subset");
    }
    return count;
}

std::vector<std::uint64_t> scaled_permutation_distribution(const PooledRanks& ranks, const PermutationScheme& scheme,
                                                           SeededStream& stream) {
    const std::size_t n = ranks.size();
    const std::uint64_t total = scheme.total(n);
    const std::vector<Group> observed = ranks.labels_by_rank();

    std::vector<std::uint64_t> out;
    out.reserve(total);
    std::vector<std::size_t> index(n);
    std::vector<Group> relabeled(n);

    // A permutation p of rank positions relabels rank r with the label observed at rank p[r].
    auto evaluate = [&] {
        for (std::size_t r = 0; r < n; ++r) relabeled[r] = observed[index[r]];
        out.push_back(ranks.scaled_statistic_by_rank(relabeled));
    };

    std::iota(index.begin(), index.end(), std::size_t{0});
    if (scheme.mode == PermutationScheme::Mode::full) {
        do {
            evaluate();
        } while (std::next_permutation(index.begin(), index.end()));
        return out;
    }

    evaluate();  // identity
    for (std::size_t j = 0; j < scheme.m; ++j) {
        std::iota(index.begin(), index.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(index[i], index[stream.bounded(i + 1)]);
        }
        evaluate();
    }
    return out;
}

std::vector<double> permutation_distribution(const SplitSample& sample, const PermutationScheme& scheme,
                                             SeededStream& stream) {
    const PooledRanks ranks(sample);
    const auto scaled = scaled_permutation_distribution(ranks, scheme, stream);
    std::vector<double> out(scaled.size());
    std::transform(scaled.begin(), scaled.end(), out.begin(), [&](std::uint64_t s) { return ranks.to_statistic(s); });
    return out;
}

std::size_t critical_index(std::size_t m_total, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
    // Absorb representation error so that e.g. 1000 * 0.95 gives 950, not 951.
    const double target = static_cast<double>(m_total) * (1.0 - alpha);
    auto k = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
    return std::clamp<std::size_t>(k, 1, m_total);
}

TestOutcome run_test(const SplitSample& sample, double alpha, const PermutationScheme& scheme, SeededStream& stream,
                     bool randomized) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
    const PooledRanks ranks(sample);
    const std::uint64_t observed = ranks.scaled_statistic_by_rank(ranks.labels_by_rank());
    std::vector<std::uint64_t> dist = scaled_permutation_distribution(ranks, scheme, stream);

    TestOutcome out;
    out.randomized = randomized;
    out.m_total = dist.size();
    out.statistic = ranks.to_statistic(observed);

    const std::size_t at_least = static_cast<std::size_t>(
        std::count_if(dist.begin(), dist.end(), [&](std::uint64_t s) { return s >= observed; }));
    out.p_value = static_cast<double>(at_least) / static_cast<double>(out.m_total);

    const std::size_t k = critical_index(out.m_total, alpha);
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    const std::uint64_t critical = dist[k - 1];
    out.critical_value = ranks.to_statistic(critical);
    for (std::uint64_t s : dist) {
        if (s > critical) {
            ++out.m_plus;
        } else if (s == critical) {
            ++out.m_zero;
        }
    }
    out.phat = (static_cast<double>(out.m_total) * alpha - static_cast<double>(out.m_plus)) /
               static_cast<double>(out.m_zero);
    out.phat = std::clamp(out.phat, 0.0, 1.0);

    out.rejected_nonrandomized = observed > critical;
    if (observed > critical) {
        out.phi = 1.0;
    } else if (observed == critical) {
        out.phi = randomized ? out.phat : 0.0;
    } else {
        out.phi = 0.0;
    }

    if (randomized) {
        const double u = stream.uniform();
        out.rejected = out.phi == 1.0 || (out.phi > 0.0 && u < out.phi);
    } else {
        out.rejected = out.rejected_nonrandomized;
    }
    return out;
}

TestOutcome run_test_nonrandomized(const SplitSample& sample, double alpha, const PermutationScheme& scheme,
                                   SeededStream& stream) {
    return run_test(sample, alpha, scheme, stream, false);
}

}  // namespace evperm
