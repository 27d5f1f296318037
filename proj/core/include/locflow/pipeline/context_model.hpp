#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/context/app_context.hpp"
#include "locflow/context/topic_config.hpp"
#include "locflow/learn/logistic.hpp"
#include "locflow/learn/naive_bayes.hpp"
#include "locflow/learn/random_forest.hpp"
#include "locflow/pipeline/instance_labels.hpp"

namespace locflow::pipeline {

/// Label space of the intention voters, in tie-break order.
inline const std::vector<std::string> kIntentionLabels{"expected", "unexpected"};

struct ContextModelConfig {
  double nb_smoothing = 1.0;
  learn::LogisticConfig logistic;
  learn::ForestConfig forest;
};

/// The three intention classifiers voting on each running instance.
struct ContextVoters {
  std::string topic_digest;
  learn::NaiveBayesModel naive_bayes;
  learn::LogisticModel logistic;
  learn::RandomForestModel forest;
};

/// Trains all three voters on the contexts that have an expected/unexpected
/// label. Throws DataError when a label names an unknown instance or is
/// "filtered", and TrainingError when either class is missing.
ContextVoters train_context_voters(std::span<const context::AppContext> contexts,
                                   std::span<const InstanceLabel> labels, const context::TopicConfig& topics,
                                   const ContextModelConfig& config = {});

/// A voter maps a context to "expected" or "unexpected".
using Voter = std::function<std::string(const context::AppContext&)>;

/// One label per context, in input order; disagreement yields filtered.
std::vector<InstanceLabel> label_instances(std::span<const context::AppContext> contexts, const Voter& rf,
                                           const Voter& nb, const Voter& lr);

/// Same, with the trained voters. Throws DataError when the topic config
/// differs from the one the voters were trained with.
std::vector<InstanceLabel> label_instances(std::span<const context::AppContext> contexts,
                                           const ContextVoters& voters, const context::TopicConfig& topics);

std::string dump_context_model(const ContextVoters& voters);
/// Throws SchemaError on a schema mismatch or corrupt document.
ContextVoters load_context_model(std::string_view text);

}  // namespace locflow::pipeline
