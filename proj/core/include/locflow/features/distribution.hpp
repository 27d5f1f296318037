#pragma once

#include <array>
#include <span>

namespace locflow::features {

/// Seven-number summary of a sample using population moments.
///
/// Conventions: an empty sample yields all zeros; a zero-variance sample
/// (including a singleton) has min = max = median = mean = the value and
/// std_dev = skewness = kurtosis = 0. Kurtosis is m4 / sigma^4 (not excess).
struct DistributionStats {
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;

  std::array<double, 7> as_array() const { return {min, max, median, mean, std_dev, skewness, kurtosis}; }
};

DistributionStats distribution_stats(std::span<const double> values);

}  // namespace locflow::features
