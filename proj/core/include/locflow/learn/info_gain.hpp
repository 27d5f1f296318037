#pragma once

#include <string>
#include <vector>

#include "locflow/learn/dataset.hpp"

namespace locflow::learn {

struct FeatureGain {
  std::string feature;
  double gain = 0.0;       // bits
  double threshold = 0.0;  // split point achieving the gain
};

/// Shannon entropy (bits) of a count vector.
double entropy_bits(std::span<const double> counts);

/// H(label) - H(label | best threshold split of f) for every feature, sorted
/// by descending gain with the feature name as tiebreak. Binary features split
/// at 0.5; numeric ones at the entropy-minimizing midpoint.
std::vector<FeatureGain> info_gain(const LabeledDataset& data);

}  // namespace locflow::learn
