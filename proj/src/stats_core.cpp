#include "evperm/stats_core.hpp"

#include "evperm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace evperm {

namespace {

void require_finite(std::span<const double> values, const char* name) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidInput(std::string(name) + " subsample contains a non-finite value");
        }
    }
}

}  // namespace

SplitSample::SplitSample(std::vector<double> pre, std::vector<double> post)
    : pre_(std::move(pre)), post_(std::move(post)) {
    if (pre_.empty() || post_.empty()) {
        throw InvalidInput("both subsamples must be non-empty");
    }
    require_finite(pre_, "pre");
    require_finite(post_, "post");
}

double ecdf_eval(std::span<const double> sample, double x) {
    if (sample.empty()) {
        throw InvalidInput("ecdf of an empty sample");
    }
    std::size_t count = 0;
    for (double y : sample) {
        if (!std::isfinite(y)) {
            throw InvalidInput("ecdf sample contains a non-finite value");
        }
        if (y <= x) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(sample.size());
}

PooledRanks::PooledRanks(const SplitSample& sample) : k1_(sample.k1()), k2_(sample.k2()) {
    const std::size_t n = k1_ + k2_;

    // S <= N * (k1*k2)^2 must fit in 64 bits.
    const long double bound = static_cast<long double>(n) * std::pow(static_cast<long double>(k1_) * k2_, 2.0L);
    if (bound >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
        throw InvalidInput("subsamples too large for exact statistic evaluation");
    }

    pooled_.reserve(n);
    pooled_.insert(pooled_.end(), sample.pre().begin(), sample.pre().end());
    pooled_.insert(pooled_.end(), sample.post().begin(), sample.post().end());
    membership_.assign(k1_, Group::pre);
    membership_.resize(n, Group::post);

    sortperm_.resize(n);
    std::iota(sortperm_.begin(), sortperm_.end(), std::size_t{0});
    std::stable_sort(sortperm_.begin(), sortperm_.end(),
                     [this](std::size_t a, std::size_t b) { return pooled_[a] < pooled_[b]; });

    tie_end_.assign(n, 1);
    for (std::size_t r = 0; r + 1 < n; ++r) {
        if (pooled_[sortperm_[r]] == pooled_[sortperm_[r + 1]]) tie_end_[r] = 0;
    }

    const double kk = static_cast<double>(k1_) * static_cast<double>(k2_);
    denominator_ = static_cast<double>(n) * kk * kk;
}

std::uint64_t PooledRanks::scaled_statistic_by_rank(std::span<const Group> labels_by_rank) const noexcept {
    const auto k1 = static_cast<std::int64_t>(k1_);
    const auto k2 = static_cast<std::int64_t>(k2_);
    std::int64_t c1 = 0;
    std::int64_t c2 = 0;
    std::uint64_t group_size = 0;
    std::uint64_t total = 0;
    const std::size_t n = labels_by_rank.size();
    for (std::size_t r = 0; r < n; ++r) {
        if (labels_by_rank[r] == Group::pre) {
            ++c1;
        } else {
            ++c2;
        }
        ++group_size;
        if (tie_end_[r]) {
            // Every member of a tie group sees the ECDFs evaluated at the group's value.
            const std::int64_t gap = k2 * c1 - k1 * c2;
            total += group_size * static_cast<std::uint64_t>(gap * gap);
            group_size = 0;
        }
    }
    return total;
}

std::uint64_t PooledRanks::scaled_statistic(std::span<const Group> assignment) const {
    if (assignment.size() != size()) {
        throw InvalidInput("assignment length differs from pooled sample size");
    }
    const auto pre_count = static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), Group::pre));
    if (pre_count != k1_) {
        throw InvalidInput("assignment must contain exactly k1 pre labels and k2 post labels");
    }
    std::vector<Group> by_rank(size());
    for (std::size_t r = 0; r < by_rank.size(); ++r) by_rank[r] = assignment[sortperm_[r]];
    return scaled_statistic_by_rank(by_rank);
}

std::vector<Group> PooledRanks::labels_by_rank() const {
    std::vector<Group> by_rank(size());
    for (std::size_t r = 0; r < by_rank.size(); ++r) by_rank[r] = membership_[sortperm_[r]];
    return by_rank;
}

double cvm_statistic(const SplitSample& sample) {
    const PooledRanks ranks(sample);
    return ranks.to_statistic(ranks.scaled_statistic_by_rank(ranks.labels_by_rank()));
}

double cvm_statistic_permuted(const PooledRanks& ranks, std::span<const Group> assignment) {
    return ranks.to_statistic(ranks.scaled_statistic(assignment));
}

}  // namespace evperm
