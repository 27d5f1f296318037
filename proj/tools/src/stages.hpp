#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/eval/report.hpp"
#include "locflow/features/feature_table.hpp"
#include "locflow/pipeline/flow_labels.hpp"
#include "run_config.hpp"

namespace locflow::tool {

enum class Stage { sessionize, featurize, train_context, label, train_flow, classify, evaluate, cdf };

std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);
/// Pipeline order.
const std::vector<Stage>& all_stages();

/// Artifact file names inside the output directory.
struct Artifacts {
  static constexpr const char* flows = "flows.jsonl";
  static constexpr const char* features = "features.tsv";
  static constexpr const char* context_model = "context_model.json";
  static constexpr const char* instance_verdicts = "instance_verdicts.jsonl";
  static constexpr const char* flow_labels = "flow_labels.jsonl";
  static constexpr const char* bundle = "bundle.json";
  static constexpr const char* verdicts = "verdicts.jsonl";
  static constexpr const char* report_text = "report.txt";
  static constexpr const char* report_json = "report.json";
  static std::string cdf(std::string_view selector) { return "cdf_" + std::string(selector) + ".tsv"; }
};

/// Runs stages against one RunConfig. Every artifact is written atomically
/// next to a "<artifact>.manifest.json" recording input digests, the
/// effective config, the seed, the tool version and a timestamp.
class StageRunner {
 public:
  explicit StageRunner(RunConfig config, std::ostream* log = nullptr);

  std::vector<std::filesystem::path> run(Stage stage);
  std::vector<std::filesystem::path> run_all();

  const RunConfig& config() const { return config_; }
  std::filesystem::path artifact(std::string_view name) const { return config_.out_dir / std::string(name); }

 private:
  std::vector<std::filesystem::path> sessionize();
  std::vector<std::filesystem::path> featurize();
  std::vector<std::filesystem::path> train_context();
  std::vector<std::filesystem::path> label();
  std::vector<std::filesystem::path> train_flow();
  std::vector<std::filesystem::path> classify();
  std::vector<std::filesystem::path> evaluate();
  std::vector<std::filesystem::path> cdf();

  std::filesystem::path upstream(std::string_view name, Stage producer) const;
  const std::filesystem::path& input(const std::optional<std::filesystem::path>& path, const char* key, Stage stage) const;
  std::filesystem::path emit(Stage stage, std::string_view name, const std::string& contents,
                             const std::vector<std::filesystem::path>& inputs);
  void note(const std::string& message);

  RunConfig config_;
  std::ostream* log_;
};

/// The evaluation behind the "evaluate" stage: k-fold random forest per
/// feature set scored against ground truth where given, plus a held-out
/// one-class test and an information-gain ranking.
eval::EvalReport evaluate_flows(const std::vector<features::FeatureRow>& rows,
                                const std::vector<pipeline::FlowLabel>& auto_labels,
                                const std::vector<pipeline::FlowLabel>& ground_truth, const RunConfig& config);

}  // namespace locflow::tool
