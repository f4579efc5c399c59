// Descriptive statistics for experiment reports.

#ifndef MEMONE_STATS_HPP
#define MEMONE_STATS_HPP

#include <span>

namespace memone {

/// std is the sample standard deviation (n - 1). Percentiles interpolate
/// linearly between order statistics. Skewness is the moment coefficient
/// g1 = m3 / m2^(3/2) and kurtosis the excess g2 = m4 / m2^2 - 3, both with
/// biased central moments.
struct SummaryStatistics {
  int count = 0;
  double mean = 0.0;
  double std = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double max = 0.0;
  double median = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

SummaryStatistics summarize(std::span<const double> xs);

/// Linear-interpolation percentile, q in [0, 100].
double percentile(std::span<const double> xs, double q);

}  // namespace memone

#endif  // MEMONE_STATS_HPP
