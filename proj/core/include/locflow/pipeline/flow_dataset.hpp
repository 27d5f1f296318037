#pragma once

#include <span>
#include <string>
#include <vector>

#include "locflow/capture/flow.hpp"
#include "locflow/common/sparse_vector.hpp"
#include "locflow/features/feature_table.hpp"
#include "locflow/features/flow_vector.hpp"
#include "locflow/learn/dataset.hpp"
#include "locflow/pipeline/flow_labels.hpp"

namespace locflow::pipeline {

enum class DatasetMode { supervised, one_class };

struct FlowVector {
  std::string flow_id;
  SparseFeatureVector features;
};

std::vector<FlowVector> flow_vectors(std::span<const capture::HttpFlow> flows, features::FeatureSet set);
std::vector<FlowVector> flow_vectors(std::span<const features::FeatureRow> rows, features::FeatureSet set);

/// Rows for the flows that carry a label, in flow order. Supervised mode keeps
/// all three classes over kFlowLabelSpace and throws DataError naming any
/// class without rows; one-class mode keeps illegal-loc rows only. The
/// vocabulary is the union over retained rows unless given; with
/// `min_lexical_rows` > 1, non-statistical features seen in fewer retained
/// rows are left out of it.
learn::LabeledDataset build_flow_dataset(std::span<const FlowVector> flows, std::span<const FlowLabel> labels,
                                         DatasetMode mode, const learn::Vocabulary* vocabulary = nullptr,
                                         std::size_t min_lexical_rows = 1);

}  // namespace locflow::pipeline
