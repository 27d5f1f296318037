#include "locflow/pipeline/bundle.hpp"

#include "../learn/model_json.hpp"
#include "context_model_json.hpp"
#include "locflow/common/digest.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/common/text.hpp"
#include "locflow/features/stat_features.hpp"

namespace locflow::pipeline {

using locflow::detail::json;

namespace {

std::vector<std::string> stat_feature_names() {
  std::vector<std::string> out;
  for (auto n : features::StatVector::names()) out.emplace_back(n);
  return out;
}

// Bundles are readable by any tool sharing the major.minor version.
std::string_view release_line(std::string_view version) {
  const auto first = version.find('.');
  if (first == std::string_view::npos) return version;
  return version.substr(0, version.find('.', first + 1));
}

}  // namespace

ModelBundle train_flow_models(std::span<const FlowVector> flows, std::span<const FlowLabel> labels,
                              const FlowModelConfig& config) {
  if (!config.supervised && !config.one_class) throw DataError("no flow model head enabled");
  ModelBundle bundle;
  bundle.tool_version = std::string(schema::kToolVersion);
  bundle.seed = config.forest.seed;
  bundle.feature_set = config.features;
  if (config.supervised) {
    bundle.forest = learn::train_random_forest(build_flow_dataset(flows, labels, DatasetMode::supervised, nullptr, config.min_lexical_rows), config.forest);
  }
  if (config.one_class) {
    bundle.ocsvm = learn::train_ocsvm(build_flow_dataset(flows, labels, DatasetMode::one_class), config.ocsvm);
  }
  return bundle;
}

std::string dump_bundle(const ModelBundle& bundle) {
  json j = {{"schema", schema::kBundle},
            {"tool_version", bundle.tool_version},
            {"feature_schema", schema::kFeatureTable},
            {"stat_features", stat_feature_names()},
            {"seed", bundle.seed},
            {"feature_set", features::to_string(bundle.feature_set)},
            {"topic_digest", bundle.topic_digest},
            {"hostlist_digest", bundle.hostlist_digest}};
  j["context_model"] = bundle.context ? detail::context_model_to_json(*bundle.context) : json(nullptr);
  j["random_forest"] = bundle.forest ? learn::detail::to_json(*bundle.forest) : json(nullptr);
  j["ocsvm"] = bundle.ocsvm ? learn::detail::to_json(*bundle.ocsvm) : json(nullptr);
  return j.dump() + "\n";
}

ModelBundle load_bundle(std::string_view text) {
  const auto j = locflow::detail::parse_document(text, "model bundle");
  locflow::detail::require_schema(j, schema::kBundle, "model bundle");
  ModelBundle b;
  try {
    b.tool_version = j.at("tool_version").get<std::string>();
    if (release_line(b.tool_version) != release_line(schema::kToolVersion))
      throw SchemaError("model bundle: written by version " + b.tool_version + ", this is " +
                        std::string(schema::kToolVersion));
    if (j.at("feature_schema").get<std::string>() != schema::kFeatureTable ||
        j.at("stat_features").get<std::vector<std::string>>() != stat_feature_names())
      throw SchemaError("model bundle: feature schema mismatch");
    b.seed = j.at("seed").get<std::uint64_t>();
    b.feature_set = features::feature_set_from_string(j.at("feature_set").get<std::string>());
    b.topic_digest = j.at("topic_digest").get<std::string>();
    b.hostlist_digest = j.at("hostlist_digest").get<std::string>();
    if (!j.at("context_model").is_null()) b.context = detail::context_model_from_json(j["context_model"]);
    if (!j.at("random_forest").is_null()) b.forest = learn::detail::random_forest_from_json(j["random_forest"]);
    if (!j.at("ocsvm").is_null()) b.ocsvm = learn::detail::ocsvm_from_json(j["ocsvm"]);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("model bundle: ") + e.what());
  } catch (const DataError& e) {
    throw SchemaError(std::string("model bundle: ") + e.what());
  }
  if (b.forest && b.forest->label_space != kFlowLabelSpace) throw SchemaError("model bundle: unexpected flow label space");
  if (!b.forest && !b.ocsvm) throw SchemaError("model bundle: no flow model");
  return b;
}

std::string feature_hash(const SparseFeatureVector& features) {
  Fnv1a d;
  for (const auto& [name, value] : features) {
    d.update(name);
    d.update("=");
    d.update(text::format_double(value));
    d.update("\n");
  }
  return d.hex();
}

FlowVerdict classify_flow(const ModelBundle& bundle, const capture::HttpFlow& flow) {
  // Strip everything that is not traffic before featurizing.
  capture::HttpFlow traffic;
  traffic.key = flow.key;
  traffic.packets = flow.packets;
  traffic.requests = flow.requests;

  const auto vec = features::flow_feature_vector(traffic, bundle.feature_set);
  FlowVerdict v;
  v.flow_id = traffic.id();
  v.feature_hash = feature_hash(vec);
  if (bundle.forest) {
    const auto p = bundle.forest->predict(vec);
    v.supervised_label = bundle.forest->label_space[p.label];
    v.supervised_scores = p.scores;
  }
  if (bundle.ocsvm) {
    v.one_class_decision = bundle.ocsvm->decision(vec);
    v.one_class_illegal = learn::OcsvmModel::in_class_decision(v.one_class_decision);
  }
  return v;
}

void write_verdicts(std::ostream& out, const std::vector<FlowVerdict>& verdicts) {
  for (const auto& v : verdicts) {
    json j = {{"schema", schema::kVerdict}, {"flow_id", v.flow_id}};
    if (v.supervised_label) {
      json scores = json::object();
      for (std::size_t c = 0; c < v.supervised_scores.size() && c < kFlowLabelSpace.size(); ++c)
        scores[kFlowLabelSpace[c]] = v.supervised_scores[c];
      j["supervised"] = {{"label", *v.supervised_label}, {"scores", std::move(scores)}};
    } else {
      j["supervised"] = nullptr;
    }
    if (v.one_class_illegal) {
      j["one_class"] = {{"label", *v.one_class_illegal ? "illegal-loc" : "other"}, {"decision", v.one_class_decision}};
    } else {
      j["one_class"] = nullptr;
    }
    j["feature_hash"] = v.feature_hash;
    out << j.dump() << '\n';
  }
}

}  // namespace locflow::pipeline
