#include "locflow/pipeline/context_model.hpp"

#include <map>

#include "../learn/model_json.hpp"
#include "context_model_json.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/context/context_features.hpp"
#include "locflow/pipeline/voting.hpp"

namespace locflow::pipeline {

using locflow::detail::json;

ContextVoters train_context_voters(std::span<const context::AppContext> contexts,
                                   std::span<const InstanceLabel> labels, const context::TopicConfig& topics,
                                   const ContextModelConfig& config) {
  std::map<std::string_view, const context::AppContext*> by_id;
  for (const auto& c : contexts) by_id.emplace(c.instance_id, &c);

  std::vector<SparseFeatureVector> rows;
  std::vector<std::string> names;
  for (const auto& l : labels) {
    if (l.verdict == InstanceVerdict::filtered)
      throw DataError("training label for " + l.instance_id + " must be expected or unexpected");
    const auto it = by_id.find(l.instance_id);
    if (it == by_id.end()) throw DataError("training label names unknown instance " + l.instance_id);
    rows.push_back(context::context_vector(*it->second, topics));
    names.emplace_back(to_string(l.verdict));
  }
  const auto data = learn::LabeledDataset::from_sparse(rows, names, kIntentionLabels);
  for (std::size_t c = 0; c < data.classes(); ++c) {
    if (data.class_counts()[c] == 0)
      throw TrainingError("context training set has no '" + data.label_space()[c] + "' instances");
  }

  ContextVoters voters;
  voters.topic_digest = topics.digest();
  voters.naive_bayes = learn::train_naive_bayes(data, config.nb_smoothing);
  voters.logistic = learn::train_logistic(data, config.logistic);
  voters.forest = learn::train_random_forest(data, config.forest);
  return voters;
}

std::vector<InstanceLabel> label_instances(std::span<const context::AppContext> contexts, const Voter& rf,
                                           const Voter& nb, const Voter& lr) {
  std::vector<InstanceLabel> out;
  out.reserve(contexts.size());
  for (const auto& c : contexts) {
    const auto agreed = consensus_vote(rf(c), nb(c), lr(c));
    out.push_back({c.instance_id, agreed ? instance_verdict_from_string(*agreed) : InstanceVerdict::filtered});
  }
  return out;
}

std::vector<InstanceLabel> label_instances(std::span<const context::AppContext> contexts,
                                           const ContextVoters& voters, const context::TopicConfig& topics) {
  if (topics.digest() != voters.topic_digest)
    throw DataError("topic config digest " + topics.digest() + " differs from the one the context model was trained with (" +
                    voters.topic_digest + ")");
  auto voter = [&](const auto& model) {
    return [&model, &topics](const context::AppContext& c) {
      return model.label_space[model.predict(context::context_vector(c, topics)).label];
    };
  };
  return label_instances(contexts, voter(voters.forest), voter(voters.naive_bayes), voter(voters.logistic));
}

namespace detail {

ContextVoters context_model_from_json(const json& j) {
  locflow::detail::require_schema(j, schema::kContextModel, "context model");
  ContextVoters v;
  try {
    v.topic_digest = j.at("topic_digest").get<std::string>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("context model: ") + e.what());
  }
  if (!j.contains("naive_bayes") || !j.contains("logistic") || !j.contains("random_forest"))
    throw SchemaError("context model: missing voter");
  v.naive_bayes = learn::detail::naive_bayes_from_json(j["naive_bayes"]);
  v.logistic = learn::detail::logistic_from_json(j["logistic"]);
  v.forest = learn::detail::random_forest_from_json(j["random_forest"]);
  return v;
}

json context_model_to_json(const ContextVoters& v) {
  return {{"schema", schema::kContextModel},
          {"tool_version", schema::kToolVersion},
          {"topic_digest", v.topic_digest},
          {"naive_bayes", learn::detail::to_json(v.naive_bayes)},
          {"logistic", learn::detail::to_json(v.logistic)},
          {"random_forest", learn::detail::to_json(v.forest)}};
}

}  // namespace detail

std::string dump_context_model(const ContextVoters& voters) { return detail::context_model_to_json(voters).dump() + "\n"; }

ContextVoters load_context_model(std::string_view text) {
  return detail::context_model_from_json(locflow::detail::parse_document(text, "context model"));
}

}  // namespace locflow::pipeline
