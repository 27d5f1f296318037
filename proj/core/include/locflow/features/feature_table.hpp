#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "locflow/capture/flow.hpp"
#include "locflow/common/sparse_vector.hpp"
#include "locflow/features/stat_features.hpp"

namespace locflow::features {

/// Tab-separated featurized flows. The first line is "#schema<TAB>version",
/// the second the column header: flow_id, the 31 statistical columns, and a
/// "lexical" column of space-separated name:value pairs.
void write_feature_table(std::ostream& out, const std::vector<capture::HttpFlow>& flows);

struct FeatureRow {
  std::string flow_id;
  StatVector stats;
  SparseFeatureVector lexical;
};

std::vector<FeatureRow> read_feature_table(std::istream& in);

}  // namespace locflow::features
