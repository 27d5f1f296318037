#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/capture/flow.hpp"
#include "locflow/features/flow_vector.hpp"
#include "locflow/learn/ocsvm.hpp"
#include "locflow/learn/random_forest.hpp"
#include "locflow/pipeline/context_model.hpp"
#include "locflow/pipeline/flow_dataset.hpp"

namespace locflow::pipeline {

struct FlowModelConfig {
  features::FeatureSet features = features::FeatureSet::both;
  bool supervised = true;
  bool one_class = true;
  // Supervised head only. The one-class head keeps every token because its
  // decision charges unseen tokens as distance; pruning would make training
  // rows look closer than held-out ones.
  std::size_t min_lexical_rows = 1;
  learn::ForestConfig forest;
  learn::OcsvmConfig ocsvm;
};

/// Everything needed at testing time, plus provenance of the training inputs.
struct ModelBundle {
  std::string tool_version;
  std::uint64_t seed = 0;
  features::FeatureSet feature_set = features::FeatureSet::both;
  std::string topic_digest;
  std::string hostlist_digest;
  std::optional<ContextVoters> context;  // carried for provenance; never used by classify_flow
  std::optional<learn::RandomForestModel> forest;
  std::optional<learn::OcsvmModel> ocsvm;
};

/// Trains the enabled heads. Throws DataError when a head has no usable rows.
ModelBundle train_flow_models(std::span<const FlowVector> flows, std::span<const FlowLabel> labels,
                              const FlowModelConfig& config);

std::string dump_bundle(const ModelBundle& bundle);
/// Throws SchemaError on a bundle or feature-schema version mismatch.
ModelBundle load_bundle(std::string_view text);

struct FlowVerdict {
  std::string flow_id;
  std::optional<std::string> supervised_label;
  std::vector<double> supervised_scores;  // kFlowLabelSpace order
  std::optional<bool> one_class_illegal;
  double one_class_decision = 0.0;
  std::string feature_hash;

  friend bool operator==(const FlowVerdict&, const FlowVerdict&) = default;
};

/// Uses only the flow's packets and requests and the bundle.
FlowVerdict classify_flow(const ModelBundle& bundle, const capture::HttpFlow& flow);

/// Digest of a sparse vector's names and exact values.
std::string feature_hash(const SparseFeatureVector& features);

void write_verdicts(std::ostream& out, const std::vector<FlowVerdict>& verdicts);

}  // namespace locflow::pipeline
