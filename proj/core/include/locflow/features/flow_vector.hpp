#pragma once

#include <string_view>

#include "locflow/capture/flow.hpp"
#include "locflow/common/sparse_vector.hpp"
#include "locflow/features/stat_features.hpp"

namespace locflow::features {

enum class FeatureSet { statistical, lexical, both };

std::string_view to_string(FeatureSet set);
FeatureSet feature_set_from_string(std::string_view name);

/// Prefix carried by statistical features in combined vectors ("stat:tcp_count").
inline constexpr std::string_view kStatPrefix = "stat:";

/// Learner-facing vector for a flow. Statistical features are namespaced with
/// kStatPrefix; lexical ones keep their host:/path:/len_* names.
SparseFeatureVector flow_feature_vector(const capture::HttpFlow& flow, FeatureSet set);

/// Same vector from precomputed parts (a feature-table row).
SparseFeatureVector combine_features(const StatVector& stats, const SparseFeatureVector& lexical, FeatureSet set);

}  // namespace locflow::features
