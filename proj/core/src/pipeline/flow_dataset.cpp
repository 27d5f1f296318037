#include "locflow/pipeline/flow_dataset.hpp"

#include <map>
#include <unordered_map>

#include "locflow/common/errors.hpp"

namespace locflow::pipeline {

std::vector<FlowVector> flow_vectors(std::span<const capture::HttpFlow> flows, features::FeatureSet set) {
  std::vector<FlowVector> out;
  out.reserve(flows.size());
  for (const auto& f : flows) out.push_back({f.id(), features::flow_feature_vector(f, set)});
  return out;
}

std::vector<FlowVector> flow_vectors(std::span<const features::FeatureRow> rows, features::FeatureSet set) {
  std::vector<FlowVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r.flow_id, features::combine_features(r.stats, r.lexical, set)});
  return out;
}

learn::LabeledDataset build_flow_dataset(std::span<const FlowVector> flows, std::span<const FlowLabel> labels,
                                         DatasetMode mode, const learn::Vocabulary* vocabulary,
                                         std::size_t min_lexical_rows) {
  std::unordered_map<std::string_view, FlowClass> by_id;
  for (const auto& l : labels) {
    if (!by_id.emplace(l.flow_id, l.cls).second) throw DataError("duplicate label for flow " + l.flow_id);
  }

  std::vector<SparseFeatureVector> rows;
  std::vector<std::string> names;
  for (const auto& f : flows) {
    const auto it = by_id.find(f.flow_id);
    if (it == by_id.end()) continue;
    if (mode == DatasetMode::one_class && it->second != FlowClass::illegal_loc) continue;
    rows.push_back(f.features);
    names.emplace_back(to_string(it->second));
  }

  std::vector<std::string> space =
      mode == DatasetMode::supervised ? kFlowLabelSpace : std::vector<std::string>{std::string(to_string(FlowClass::illegal_loc))};
  learn::Vocabulary pruned;
  if (!vocabulary) {
    // Statistical columns are always present, even when zero in every row.
    std::map<std::string, std::size_t, std::less<>> seen;
    bool has_stats = false;
    for (const auto& r : rows) {
      for (const auto& [name, value] : r) {
        ++seen[name];
        has_stats = has_stats || name.starts_with(features::kStatPrefix);
      }
    }
    if (has_stats) {
      for (auto n : features::StatVector::names()) seen.emplace(std::string(features::kStatPrefix) + std::string(n), 0);
    }
    std::vector<std::string> keep;
    for (const auto& [name, count] : seen) {
      if (count >= min_lexical_rows || name.starts_with(features::kStatPrefix)) keep.emplace_back(name);
    }
    pruned = learn::Vocabulary(std::move(keep));
    vocabulary = &pruned;
  }
  auto data = learn::LabeledDataset::from_sparse(rows, names, space, vocabulary);
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) throw DataError("flow dataset has no rows of class " + space[c]);
  }
  return data;
}

}  // namespace locflow::pipeline
