#include "locflow/learn/info_gain.hpp"

#include <algorithm>
#include <cmath>

namespace locflow::learn {

double entropy_bits(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) {
      const double p = c / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

std::vector<FeatureGain> info_gain(const LabeledDataset& data) {
  const std::size_t n = data.rows();
  const std::size_t k = data.classes();
  std::vector<double> label_counts(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) label_counts[data.label(i)] += 1.0;
  const double prior = entropy_bits(label_counts);

  std::vector<FeatureGain> out;
  out.reserve(data.features());
  std::vector<std::pair<double, std::size_t>> column(n);
  for (std::size_t f = 0; f < data.features(); ++f) {
    for (std::size_t i = 0; i < n; ++i) column[i] = {data.value(i, f), data.label(i)};
    std::sort(column.begin(), column.end());

    FeatureGain g{data.vocabulary().name(f), 0.0, n ? column.front().first : 0.0};
    std::vector<double> left(k, 0.0), right = label_counts;
    double best_conditional = prior;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left[column[i].second] += 1.0;
      right[column[i].second] -= 1.0;
      if (column[i].first == column[i + 1].first) continue;
      const double wl = static_cast<double>(i + 1) / static_cast<double>(n);
      const double conditional = wl * entropy_bits(left) + (1.0 - wl) * entropy_bits(right);
      if (conditional < best_conditional) {
        best_conditional = conditional;
        g.threshold = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
      }
    }
    g.gain = std::max(0.0, prior - best_conditional);
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(), [](const FeatureGain& a, const FeatureGain& b) {
    return a.gain != b.gain ? a.gain > b.gain : a.feature < b.feature;
  });
  return out;
}

}  // namespace locflow::learn
