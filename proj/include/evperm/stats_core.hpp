#pragma once

// Empirical CDFs and the two-sample Cramer-von Mises statistic.
//
// The statistic for pre/post subsamples of sizes k1, k2 (N = k1 + k2) is
//
//     T = (1/N) * sum over pooled y of (F1(y) - F2(y))^2
//
// with right-continuous ECDFs F_j(x) = #{y in sample j : y <= x} / k_j.
// Internally every value is kept as the exact integer
//
//     S = sum over pooled y of (k2 * c1(y) - k1 * c2(y))^2,   T = S / (N * (k1*k2)^2)
//
// where c_j(y) counts sample-j observations <= y. Comparisons between
// permuted statistics are done on S, so ties are detected exactly and the
// statistic depends on the data only through pooled ranks.

#include <cstdint>
#include <span>
#include <vector>

namespace evperm {

enum class Group : std::uint8_t { pre = 0, post = 1 };

// Pre-event and post-event observations around a cutoff. Both sides are
// non-empty and every value is finite.
class SplitSample {
public:
    SplitSample(std::vector<double> pre, std::vector<double> post);

    std::span<const double> pre() const noexcept { return pre_; }
    std::span<const double> post() const noexcept { return post_; }
    std::size_t k1() const noexcept { return pre_.size(); }
    std::size_t k2() const noexcept { return post_.size(); }
    std::size_t size() const noexcept { return pre_.size() + post_.size(); }
    bool equal_sizes() const noexcept { return pre_.size() == post_.size(); }

    SplitSample swapped() const { return SplitSample(post_, pre_); }

private:
    std::vector<double> pre_;
    std::vector<double> post_;
};

// (1/|sample|) * #{y in sample : y <= x}.
double ecdf_eval(std::span<const double> sample, double x);

// Pooled data prepared for repeated evaluation of the statistic under
// relabelings: one O(N log N) sort, then O(N) per assignment.
class PooledRanks {
public:
    explicit PooledRanks(const SplitSample& sample);

    std::size_t k1() const noexcept { return k1_; }
    std::size_t k2() const noexcept { return k2_; }
    std::size_t size() const noexcept { return pooled_.size(); }

    // Pre values first, then post values, in their original order.
    std::span<const double> pooled() const noexcept { return pooled_; }
    std::span<const Group> membership() const noexcept { return membership_; }
    // pooled()[sortperm()[r]] is non-decreasing in r.
    std::span<const std::size_t> sortperm() const noexcept { return sortperm_; }

    // Exact scaled statistic S for a labeling of pooled positions.
    // Throws InvalidInput unless the labeling has exactly k1 pre and k2 post labels.
    std::uint64_t scaled_statistic(std::span<const Group> assignment) const;

    // Same, but the labels are given in sorted (rank) order and are not validated.
    std::uint64_t scaled_statistic_by_rank(std::span<const Group> labels_by_rank) const noexcept;

    // Labels of the observed sample in rank order.
    std::vector<Group> labels_by_rank() const;

    // S -> T conversion; monotone, and equal S map to equal T.
    double to_statistic(std::uint64_t scaled) const noexcept { return static_cast<double>(scaled) / denominator_; }

private:
    std::size_t k1_;
    std::size_t k2_;
    std::vector<double> pooled_;
    std::vector<Group> membership_;
    std::vector<std::size_t> sortperm_;
    // tie_end_[r] is 1 when rank r is the last member of its tie group.
    std::vector<std::uint8_t> tie_end_;
    double denominator_;
};

double cvm_statistic(const SplitSample& sample);

double cvm_statistic_permuted(const PooledRanks& ranks, std::span<const Group> assignment);

}  // namespace evperm
