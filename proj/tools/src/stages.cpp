#include "stages.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "locflow/capture/flow_io.hpp"
#include "locflow/capture/http_parser.hpp"
#include "locflow/capture/pcap.hpp"
#include "locflow/capture/sessionize.hpp"
#include "locflow/common/atomic_file.hpp"
#include "locflow/common/digest.hpp"
#include "locflow/common/errors.hpp"
#include "locflow/common/random.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/common/text.hpp"
#include "locflow/context/app_context.hpp"
#include "locflow/context/topic_config.hpp"
#include "locflow/eval/cdf.hpp"
#include "locflow/eval/kfold.hpp"
#include "locflow/learn/info_gain.hpp"
#include "locflow/pipeline/bundle.hpp"
#include "locflow/pipeline/context_model.hpp"
#include "locflow/pipeline/flow_dataset.hpp"

namespace locflow::tool {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Seed streams derived from --seed.
namespace streams {
constexpr std::uint64_t context_forest = 1;
constexpr std::uint64_t flow_forest = 2;
constexpr std::uint64_t eval_forest = 3;
constexpr std::uint64_t eval_folds = 4;
constexpr std::uint64_t one_class_split = 5;
}  // namespace streams

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::sessionize:
      return "sessionize";
    case Stage::featurize:
      return "featurize";
    case Stage::train_context:
      return "train-context";
    case Stage::label:
      return "label";
    case Stage::train_flow:
      return "train-flow";
    case Stage::classify:
      return "classify";
    case Stage::evaluate:
      return "evaluate";
    case Stage::cdf:
      return "cdf";
  }
  return "?";
}

Stage stage_from_string(std::string_view name) {
  for (auto s : all_stages()) {
    if (to_string(s) == name) return s;
  }
  throw UsageError("unknown stage '" + std::string(name) + "'");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> stages = {Stage::sessionize, Stage::featurize, Stage::train_context,
                                            Stage::label,      Stage::train_flow, Stage::classify,
                                            Stage::evaluate,   Stage::cdf};
  return stages;
}

namespace {

template <class T, class Reader>
T read_with(const fs::path& path, Reader reader) {
  std::istringstream in(read_file(path));
  return reader(in);
}

template <class Writer>
std::string write_with(Writer writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::set<std::string> load_device_ips(const RunConfig& c) {
  auto ips = c.device_ips;
  if (c.device_ips_file) {
    for (auto line : text::split(read_file(*c.device_ips_file), '\n')) {
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = text::trim(line);
      if (!line.empty()) ips.emplace(line);
    }
  }
  return ips;
}

}  // namespace

StageRunner::StageRunner(RunConfig config, std::ostream* log) : config_(std::move(config)), log_(log) {}

void StageRunner::note(const std::string& message) {
  if (log_) *log_ << message << '\n';
}

fs::path StageRunner::upstream(std::string_view name, Stage producer) const {
  auto p = artifact(name);
  if (!fs::exists(p))
    throw DataError("missing " + p.string() + "; run the '" + std::string(to_string(producer)) + "' stage first");
  return p;
}

const fs::path& StageRunner::input(const std::optional<fs::path>& path, const char* key, Stage stage) const {
  if (!path) throw UsageError(std::string(to_string(stage)) + " needs '" + key + "' in the run config");
  if (!fs::exists(*path)) throw DataError(std::string(key) + " file " + path->string() + " does not exist");
  return *path;
}

fs::path StageRunner::emit(Stage stage, std::string_view name, const std::string& contents,
                           const std::vector<fs::path>& inputs) {
  fs::create_directories(config_.out_dir);
  const auto path = artifact(name);
  write_file_atomic(path, contents);

  json in = json::array();
  for (const auto& p : inputs) in.push_back({{"path", p.string()}, {"digest", file_digest(p.string())}});
  json manifest = {{"schema", schema::kManifest},
                   {"stage", to_string(stage)},
                   {"artifact", std::string(name)},
                   {"artifact_digest", fnv1a_hex(contents)},
                   {"inputs", std::move(in)},
                   {"config", json::parse(dump_run_config(config_))},
                   {"seed", config_.seed},
                   {"tool_version", schema::kToolVersion},
                   {"created_at", utc_timestamp()}};
  write_file_atomic(path.string() + ".manifest.json", manifest.dump(2) + "\n");
  return path;
}

std::vector<fs::path> StageRunner::run(Stage stage) {
  switch (stage) {
    case Stage::sessionize:
      return sessionize();
    case Stage::featurize:
      return featurize();
    case Stage::train_context:
      return train_context();
    case Stage::label:
      return label();
    case Stage::train_flow:
      return train_flow();
    case Stage::classify:
      return classify();
    case Stage::evaluate:
      return evaluate();
    case Stage::cdf:
      return cdf();
  }
  return {};
}

std::vector<fs::path> StageRunner::run_all() {
  std::vector<fs::path> out;
  for (auto s : all_stages()) {
    auto produced = run(s);
    out.insert(out.end(), produced.begin(), produced.end());
  }
  return out;
}

std::vector<fs::path> StageRunner::sessionize() {
  if (config_.captures.empty()) throw UsageError("sessionize needs 'captures' in the run config");
  capture::PcapReadOptions options;
  options.device_ips = load_device_ips(config_);

  std::vector<fs::path> inputs;
  std::vector<capture::PacketMeta> packets;
  for (const auto& path : config_.captures) {
    if (!fs::exists(path)) throw DataError("capture " + path.string() + " does not exist");
    auto result = capture::read_pcap_file(path, options);
    const auto& d = result.diagnostics;
    note("sessionize: " + path.string() + ": " + std::to_string(d.tcp_packets) + " TCP packets, " +
         std::to_string(d.non_tcp) + " non-TCP, " + std::to_string(d.malformed) + " malformed");
    packets.insert(packets.end(), std::make_move_iterator(result.packets.begin()),
                   std::make_move_iterator(result.packets.end()));
    inputs.push_back(path);
  }
  std::stable_sort(packets.begin(), packets.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });

  capture::SessionizeDiagnostics diag;
  auto flows = capture::sessionize(packets, {config_.idle_timeout}, &diag);
  capture::attach_requests(flows);
  if (config_.annotations) {
    const auto& path = input(config_.annotations, "annotations", Stage::sessionize);
    const auto annotations = read_with<std::vector<capture::FlowAnnotation>>(path, capture::read_flow_annotations);
    const auto matched = capture::apply_annotations(flows, annotations);
    note("sessionize: annotated " + std::to_string(matched) + " of " + std::to_string(flows.size()) + " flows");
    inputs.push_back(path);
  }
  if (config_.device_ips_file) inputs.push_back(*config_.device_ips_file);
  note("sessionize: " + std::to_string(flows.size()) + " flows");
  return {emit(Stage::sessionize, Artifacts::flows, capture::flow_records_text(flows), inputs)};
}

std::vector<fs::path> StageRunner::featurize() {
  const auto src = upstream(Artifacts::flows, Stage::sessionize);
  const auto flows = read_with<std::vector<capture::HttpFlow>>(src, capture::read_flow_records);
  note("featurize: " + std::to_string(flows.size()) + " flows");
  return {emit(Stage::featurize, Artifacts::features,
               write_with([&](std::ostream& o) { features::write_feature_table(o, flows); }), {src})};
}

std::vector<fs::path> StageRunner::train_context() {
  const auto& contexts_path = input(config_.contexts, "contexts", Stage::train_context);
  const auto& labels_path = input(config_.training_labels, "training_labels", Stage::train_context);
  const auto& topics_path = input(config_.topics, "topics", Stage::train_context);
  const auto contexts = read_with<std::vector<context::AppContext>>(contexts_path, context::read_app_contexts);
  const auto labels = read_with<std::vector<pipeline::InstanceLabel>>(labels_path, pipeline::read_instance_labels);
  const auto topics = context::load_topic_config(topics_path);

  pipeline::ContextModelConfig cfg;
  cfg.nb_smoothing = config_.nb_smoothing;
  cfg.logistic = config_.logistic;
  cfg.forest = config_.forest_for(streams::context_forest);
  const auto voters = pipeline::train_context_voters(contexts, labels, topics, cfg);
  note("train-context: " + std::to_string(labels.size()) + " labelled instances, " +
       std::to_string(voters.naive_bayes.vocabulary.size()) + " context features");
  return {emit(Stage::train_context, Artifacts::context_model, pipeline::dump_context_model(voters),
               {contexts_path, labels_path, topics_path})};
}

std::vector<fs::path> StageRunner::label() {
  const auto model_path = upstream(Artifacts::context_model, Stage::train_context);
  const auto flows_path = upstream(Artifacts::flows, Stage::sessionize);
  const auto& contexts_path = input(config_.contexts, "contexts", Stage::label);
  const auto& topics_path = input(config_.topics, "topics", Stage::label);

  const auto voters = pipeline::load_context_model(read_file(model_path));
  const auto contexts = read_with<std::vector<context::AppContext>>(contexts_path, context::read_app_contexts);
  const auto topics = context::load_topic_config(topics_path);
  const auto flows = read_with<std::vector<capture::HttpFlow>>(flows_path, capture::read_flow_records);
  pipeline::HostnameList hostlist;
  std::vector<fs::path> inputs{model_path, flows_path, contexts_path, topics_path};
  if (config_.hostlist) {
    hostlist = pipeline::HostnameList::load(input(config_.hostlist, "hostlist", Stage::label));
    inputs.push_back(*config_.hostlist);
  }

  const auto instances = pipeline::label_instances(contexts, voters, topics);
  const auto filtered = std::count_if(instances.begin(), instances.end(), [](const auto& l) {
    return l.verdict == pipeline::InstanceVerdict::filtered;
  });
  const auto result = pipeline::auto_label_flows(flows, instances, hostlist);
  note("label: " + std::to_string(instances.size()) + " instances (" + std::to_string(filtered) + " filtered), " +
       std::to_string(result.labels.size()) + " flows labelled, " + std::to_string(result.dropped_filtered) +
       " dropped from filtered instances, " + std::to_string(result.dropped_unresolved) + " unresolved");
  return {emit(Stage::label, Artifacts::instance_verdicts,
               write_with([&](std::ostream& o) { pipeline::write_instance_labels(o, instances); }), inputs),
          emit(Stage::label, Artifacts::flow_labels,
               write_with([&](std::ostream& o) { pipeline::write_flow_labels(o, result.labels); }), inputs)};
}

std::vector<fs::path> StageRunner::train_flow() {
  const auto features_path = upstream(Artifacts::features, Stage::featurize);
  const auto labels_path = upstream(Artifacts::flow_labels, Stage::label);
  const auto rows = read_with<std::vector<features::FeatureRow>>(features_path, features::read_feature_table);
  const auto labels = read_with<std::vector<pipeline::FlowLabel>>(labels_path, pipeline::read_flow_labels);
  std::vector<fs::path> inputs{features_path, labels_path};

  pipeline::FlowModelConfig cfg;
  cfg.features = config_.features;
  cfg.supervised = config_.mode != RunMode::one_class;
  cfg.one_class = config_.mode != RunMode::supervised;
  cfg.forest = config_.forest_for(streams::flow_forest);
  cfg.ocsvm = config_.ocsvm;
  cfg.min_lexical_rows = config_.min_lexical_rows;
  auto bundle = pipeline::train_flow_models(pipeline::flow_vectors(rows, config_.features), labels, cfg);
  bundle.seed = config_.seed;

  if (const auto model = artifact(Artifacts::context_model); fs::exists(model)) {
    bundle.context = pipeline::load_context_model(read_file(model));
    bundle.topic_digest = bundle.context->topic_digest;
    inputs.push_back(model);
  } else if (config_.topics) {
    bundle.topic_digest = context::load_topic_config(*config_.topics).digest();
  }
  if (config_.hostlist) {
    bundle.hostlist_digest = pipeline::HostnameList::load(input(config_.hostlist, "hostlist", Stage::train_flow)).digest();
    inputs.push_back(*config_.hostlist);
  }
  note("train-flow: " + std::string(bundle.forest ? "random forest" : "") + (bundle.forest && bundle.ocsvm ? " + " : "") +
       (bundle.ocsvm ? "one-class SVM (" + std::to_string(bundle.ocsvm->support_vectors.size()) + " support vectors)" : ""));
  return {emit(Stage::train_flow, Artifacts::bundle, pipeline::dump_bundle(bundle), inputs)};
}

std::vector<fs::path> StageRunner::classify() {
  const auto bundle_path = upstream(Artifacts::bundle, Stage::train_flow);
  const fs::path flows_path = config_.classify_flows ? input(config_.classify_flows, "classify_flows", Stage::classify)
                                                     : upstream(Artifacts::flows, Stage::sessionize);
  const auto bundle = pipeline::load_bundle(read_file(bundle_path));
  const auto flows = read_with<std::vector<capture::HttpFlow>>(flows_path, capture::read_flow_records);
  std::vector<pipeline::FlowVerdict> verdicts;
  verdicts.reserve(flows.size());
  for (const auto& f : flows) verdicts.push_back(pipeline::classify_flow(bundle, f));
  note("classify: " + std::to_string(verdicts.size()) + " flows");
  return {emit(Stage::classify, Artifacts::verdicts,
               write_with([&](std::ostream& o) { pipeline::write_verdicts(o, verdicts); }), {bundle_path, flows_path})};
}

std::vector<fs::path> StageRunner::evaluate() {
  const auto features_path = upstream(Artifacts::features, Stage::featurize);
  const auto labels_path = upstream(Artifacts::flow_labels, Stage::label);
  const auto rows = read_with<std::vector<features::FeatureRow>>(features_path, features::read_feature_table);
  const auto labels = read_with<std::vector<pipeline::FlowLabel>>(labels_path, pipeline::read_flow_labels);
  std::vector<fs::path> inputs{features_path, labels_path};
  std::vector<pipeline::FlowLabel> truth;
  if (config_.ground_truth) {
    truth = read_with<std::vector<pipeline::FlowLabel>>(input(config_.ground_truth, "ground_truth", Stage::evaluate),
                                                        pipeline::read_flow_labels);
    inputs.push_back(*config_.ground_truth);
  }
  const auto report = evaluate_flows(rows, labels, truth, config_);
  for (const auto& e : report.evaluations) {
    note("evaluate: " + e.name + " weighted F " + text::format_double(std::round(e.weighted.f_measure * 1e4) / 1e4));
  }
  return {emit(Stage::evaluate, Artifacts::report_text, eval::render_text(report), inputs),
          emit(Stage::evaluate, Artifacts::report_json, eval::render_json(report), inputs)};
}

std::vector<fs::path> StageRunner::cdf() {
  const auto features_path = upstream(Artifacts::features, Stage::featurize);
  const auto labels_path = upstream(Artifacts::flow_labels, Stage::label);
  const auto rows = read_with<std::vector<features::FeatureRow>>(features_path, features::read_feature_table);
  std::map<std::string, std::string> cls;
  for (const auto& l : read_with<std::vector<pipeline::FlowLabel>>(labels_path, pipeline::read_flow_labels))
    cls[l.flow_id] = std::string(pipeline::to_string(l.cls));
  std::vector<fs::path> inputs{features_path, labels_path};
  if (config_.ground_truth) {
    const auto& gt = input(config_.ground_truth, "ground_truth", Stage::cdf);
    for (const auto& l : read_with<std::vector<pipeline::FlowLabel>>(gt, pipeline::read_flow_labels)) {
      if (auto it = cls.find(l.flow_id); it != cls.end()) it->second = std::string(pipeline::to_string(l.cls));
    }
    inputs.push_back(gt);
  }

  std::vector<features::StatVector> stats;
  std::vector<std::string> names;
  for (const auto& r : rows) {
    if (auto it = cls.find(r.flow_id); it != cls.end()) {
      stats.push_back(r.stats);
      names.push_back(it->second);
    }
  }
  std::vector<fs::path> out;
  for (const auto& selector : config_.cdf_selectors) {
    const auto table = eval::cdf_export(stats, names, pipeline::kFlowLabelSpace, selector);
    out.push_back(emit(Stage::cdf, Artifacts::cdf(selector),
                       write_with([&](std::ostream& o) { eval::write_cdf_table(o, selector, table); }), inputs));
  }
  note("cdf: " + std::to_string(out.size()) + " tables over " + std::to_string(stats.size()) + " flows");
  return out;
}

namespace {

std::size_t class_index(pipeline::FlowClass c) { return static_cast<std::size_t>(c); }

eval::Predictor forest_predictor(const learn::LabeledDataset& train, const learn::ForestConfig& cfg) {
  auto model = std::make_shared<learn::RandomForestModel>(learn::train_random_forest(train, cfg));
  return [model](std::span<const double> row) { return model->predict(row).label; };
}

}  // namespace

eval::EvalReport evaluate_flows(const std::vector<features::FeatureRow>& rows,
                                const std::vector<pipeline::FlowLabel>& auto_labels,
                                const std::vector<pipeline::FlowLabel>& ground_truth, const RunConfig& config) {
  std::map<std::string_view, pipeline::FlowClass> auto_by_id, truth_by_id;
  for (const auto& l : auto_labels) auto_by_id.emplace(l.flow_id, l.cls);
  for (const auto& l : ground_truth) truth_by_id.emplace(l.flow_id, l.cls);

  // Rows that carry an auto label, in feature-table order.
  std::vector<const features::FeatureRow*> labelled;
  std::vector<pipeline::FlowLabel> train_labels;
  std::vector<std::size_t> truth;
  std::size_t truth_hits = 0;
  for (const auto& r : rows) {
    const auto it = auto_by_id.find(r.flow_id);
    if (it == auto_by_id.end()) continue;
    labelled.push_back(&r);
    train_labels.push_back({r.flow_id, it->second});
    const auto t = truth_by_id.find(r.flow_id);
    truth_hits += t != truth_by_id.end();
    truth.push_back(class_index(t != truth_by_id.end() ? t->second : it->second));
  }
  std::vector<features::FeatureRow> kept;
  kept.reserve(labelled.size());
  for (const auto* r : labelled) kept.push_back(*r);

  eval::EvalReport report;
  report.seed = config.seed;
  report.folds = config.folds;
  report.notes.emplace_back("labelled flows", std::to_string(kept.size()));
  report.notes.emplace_back("scoring labels", ground_truth.empty()
                                                  ? "auto labels"
                                                  : "ground truth for " + std::to_string(truth_hits) + " flows, auto labels elsewhere");
  report.notes.emplace_back("training labels", "auto labels");

  auto forest_cfg = config.forest_for(streams::eval_forest);
  forest_cfg.jobs = config.jobs > 1 ? 1 : forest_cfg.jobs;  // parallelism goes to folds instead
  eval::KFoldOptions kopt;
  kopt.k = config.folds;
  kopt.seed = derive_seed(config.seed, streams::eval_folds);
  kopt.jobs = config.jobs;
  kopt.truth = truth;

  if (config.mode != RunMode::one_class) {
    const std::vector<std::pair<features::FeatureSet, const char*>> sets = {
        {features::FeatureSet::statistical, "statistical features"},
        {features::FeatureSet::lexical, "lexical features"},
        {features::FeatureSet::both, "statistical and lexical features"}};
    for (const auto& [set, description] : sets) {
      const auto vectors = pipeline::flow_vectors(kept, set);
      const auto data = pipeline::build_flow_dataset(vectors, train_labels, pipeline::DatasetMode::supervised, nullptr,
                                                     config.min_lexical_rows);
      const auto result = eval::kfold(data, [&](const learn::LabeledDataset& d) { return forest_predictor(d, forest_cfg); }, kopt);
      report.evaluations.push_back(eval::summarize("rf-" + std::string(features::to_string(set)),
                                                   std::to_string(config.folds) + "-fold random forest, " + description +
                                                       ", " + std::to_string(data.features()) + " features",
                                                   result.confusion));
      if (set == features::FeatureSet::both) {
        auto gains = learn::info_gain(data);
        if (gains.size() > config.info_gain_top) gains.resize(config.info_gain_top);
        report.ranking = std::move(gains);
      }
    }
  }

  if (config.mode != RunMode::supervised) {
    const auto vectors = pipeline::flow_vectors(kept, config.features);
    std::vector<std::size_t> illegal, others;
    for (std::size_t i = 0; i < train_labels.size(); ++i)
      (train_labels[i].cls == pipeline::FlowClass::illegal_loc ? illegal : others).push_back(i);
    Rng rng(derive_seed(config.seed, streams::one_class_split));
    auto shuffle = [&](std::vector<std::size_t>& v) {
      for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
    };
    shuffle(illegal);
    shuffle(others);
    const auto n_train = static_cast<std::size_t>(
        std::llround(config.one_class_train_fraction * static_cast<double>(illegal.size())));
    if (n_train == 0 || n_train >= illegal.size())
      throw DataError("one-class evaluation needs illegal-loc flows on both sides of the split (have " +
                      std::to_string(illegal.size()) + ")");
    std::vector<pipeline::FlowVector> train_vectors;
    std::vector<pipeline::FlowLabel> train_one;
    for (std::size_t i = 0; i < n_train; ++i) {
      train_vectors.push_back(vectors[illegal[i]]);
      train_one.push_back(train_labels[illegal[i]]);
    }
    const auto data = pipeline::build_flow_dataset(train_vectors, train_one, pipeline::DatasetMode::one_class);
    const auto model = learn::train_ocsvm(data, config.ocsvm);

    std::vector<std::size_t> test(illegal.begin() + static_cast<std::ptrdiff_t>(n_train), illegal.end());
    const std::size_t held = test.size();
    for (std::size_t i = 0; i < held && i < others.size(); ++i) test.push_back(others[i]);
    std::sort(test.begin(), test.end());
    eval::ConfusionMatrix cm({"illegal-loc", "other"});
    for (auto i : test) {
      const bool actual = truth[i] == class_index(pipeline::FlowClass::illegal_loc);
      const bool predicted = model.in_class_decision(model.decision(vectors[i].features));
      cm.add(actual ? 0 : 1, predicted ? 0 : 1);
    }
    auto e = eval::summarize("ocsvm-" + std::string(features::to_string(config.features)),
                             "one-class SVM trained on " + std::to_string(n_train) + " illegal-loc flows, tested on " +
                                 std::to_string(held) + " held-out illegal-loc flows and " +
                                 std::to_string(test.size() - held) + " others",
                             cm);
    report.evaluations.push_back(std::move(e));
  }
  return report;
}

}  // namespace locflow::tool
