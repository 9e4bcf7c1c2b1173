#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rumor::stats {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
Interval wilson(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

/// sup |F_n(x) - cdf(x)| for the empirical CDF of `samples`.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Pearson chi-square p-value of observed counts against expected counts.
double chi_square_pvalue(std::span<const double> observed, std::span<const double> expected);

/// Total variation distance between two histograms (normalized inside).
double total_variation(std::span<const double> p, std::span<const double> q);

double mean(std::span<const double> xs);

}  // namespace rumor::stats
