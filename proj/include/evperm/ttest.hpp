#pragma once

// Benchmark volatility-jump test built on local spot variance estimates:
//
//     t = sqrt(k) (s2_post - s2_pre) / sqrt(2 s2_post^2 + 2 s2_pre^2)
//
// with s2 the mean of squared normalized returns on each side, compared with
// two-sided standard normal critical values.

#include "evperm/stats_core.hpp"

#include <utility>

namespace evperm {

struct TTestOutcome {
    double sigma2_pre = 0.0;
    double sigma2_post = 0.0;
    double tstat = 0.0;
    double critical = 0.0;
    bool rejected = false;
};

// (mean of squares of pre, mean of squares of post).
std::pair<double, double> spot_variances(const SplitSample& sample);

// Requires equal window sizes. Throws DegenerateStatistic when both spot
// variances are zero.
TTestOutcome t_test(const SplitSample& sample, double alpha);

// Standard normal CDF.
double normal_cdf(double x);

// Inverse standard normal CDF: Acklam's rational approximation followed by one
// Halley step against normal_cdf. Throws InvalidInput outside (0, 1).
double normal_quantile(double p);

}  // namespace evperm
