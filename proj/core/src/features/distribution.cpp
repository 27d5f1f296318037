#include "locflow/features/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace locflow::features {

DistributionStats distribution_stats(std::span<const double> values) {
  DistributionStats s;
  if (values.empty()) return s;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.min = sorted.front();
  s.max = sorted.back();
  if (s.min == s.max) {
    s.median = s.mean = s.min;
    return s;
  }
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : sorted) {
    const double d = v - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);

  s.std_dev = std::sqrt(m2);
  if (m2 > 0.0) {
    s.skewness = m3 / (m2 * s.std_dev);
    s.kurtosis = m4 / (m2 * m2);
  }
  return s;
}

}  // namespace locflow::features
