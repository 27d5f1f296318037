#include "locflow/features/flow_vector.hpp"

#include <string>

#include "locflow/common/errors.hpp"
#include "locflow/features/lexical.hpp"
#include "locflow/features/stat_features.hpp"

namespace locflow::features {

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::statistical:
      return "statistical";
    case FeatureSet::lexical:
      return "lexical";
    case FeatureSet::both:
      return "both";
  }
  return "both";
}

FeatureSet feature_set_from_string(std::string_view name) {
  if (name == "statistical") return FeatureSet::statistical;
  if (name == "lexical") return FeatureSet::lexical;
  if (name == "both") return FeatureSet::both;
  throw DataError("unknown feature set '" + std::string(name) + "' (expected statistical, lexical or both)");
}

SparseFeatureVector combine_features(const StatVector& stats, const SparseFeatureVector& lexical, FeatureSet set) {
  SparseFeatureVector v;
  if (set != FeatureSet::lexical) {
    const auto& names = StatVector::names();
    for (std::size_t i = 0; i < kStatFeatureCount; ++i) v.set(std::string(kStatPrefix) + std::string(names[i]), stats[i]);
  }
  if (set != FeatureSet::statistical) v.merge(lexical);
  return v;
}

SparseFeatureVector flow_feature_vector(const capture::HttpFlow& flow, FeatureSet set) {
  return combine_features(stat_features(flow), set == FeatureSet::statistical ? SparseFeatureVector{} : flow_lexical_features(flow),
                          set);
}

}  // namespace locflow::features
