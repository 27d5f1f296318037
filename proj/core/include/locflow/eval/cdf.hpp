#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/features/stat_features.hpp"

namespace locflow::eval {

struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;  // share of the class with value <= this
};

struct ClassCdf {
  std::string label;
  std::size_t count = 0;
  std::vector<CdfPoint> points;  // ascending; empty when count == 0
};

/// Empirical CDF of one statistical feature per class, in label-space order.
/// Throws DataError for an unknown selector, listing the valid fields, or a
/// class label outside the label space.
std::vector<ClassCdf> cdf_export(std::span<const features::StatVector> rows, std::span<const std::string> labels,
                                 std::span<const std::string> label_space, std::string_view selector);

/// Tab-separated: schema line, header, then class/value/cdf rows; an empty
/// class is flagged with an "#empty" line.
void write_cdf_table(std::ostream& out, std::string_view selector, const std::vector<ClassCdf>& cdfs);

}  // namespace locflow::eval
