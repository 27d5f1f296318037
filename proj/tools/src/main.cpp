#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "locflow/common/atomic_file.hpp"
#include "locflow/common/errors.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/synth/corpus.hpp"
#include "run_config.hpp"
#include "stages.hpp"

namespace {

using namespace locflow;
using namespace locflow::tool;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config, "Run configuration (JSON)");
  cmd->add_option("--seed", o.seed, "Root seed for every stochastic component (default 20170605)");
  cmd->add_option("-j,--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("-o,--out", o.out, "Output directory (overrides $" + std::string(kOutDirEnv) + ")");
}

RunConfig effective_config(const CommonOptions& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (const char* env = std::getenv(kOutDirEnv); env && *env) c.out_dir = env;
  if (!o.out.empty()) c.out_dir = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  return c;
}

int write_synth(const std::string& dir, std::uint64_t seed, std::size_t apps, std::size_t instances) {
  synth::SynthConfig cfg;
  cfg.seed = seed;
  cfg.apps = apps;
  cfg.instances_per_app = instances;
  const auto corpus = synth::generate_corpus(cfg);
  synth::write_corpus(corpus, dir);
  using F = synth::CorpusFiles;
  nlohmann::json run = {{"captures", {F::capture}},    {"annotations", F::annotations},
                        {"device_ips", F::device_ips}, {"contexts", F::contexts},
                        {"training_labels", F::training_labels}, {"topics", F::topics},
                        {"hostlist", F::hostlist},     {"ground_truth", F::ground_truth},
                        {"out_dir", "out"},            {"seed", seed}};
  write_file_atomic(std::filesystem::path(dir) / "run.json", run.dump(2) + "\n");
  std::cerr << "synth: " << corpus.contexts.size() << " instances, " << corpus.ground_truth.size() << " flows, "
            << corpus.frames.size() << " packets -> " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locflow: flow-level detection of location sharing that does not match app context"};
  app.set_version_flag("--version", std::string(schema::kToolVersion));
  app.require_subcommand(1);

  CommonOptions common;
  std::string stage_name;
  std::vector<std::pair<CLI::App*, Stage>> stage_cmds;
  const std::vector<std::pair<Stage, const char*>> help = {
      {Stage::sessionize, "Read captures into HTTP flows (flows.jsonl)"},
      {Stage::featurize, "Compute statistical and lexical features (features.tsv)"},
      {Stage::train_context, "Train the three intention voters (context_model.json)"},
      {Stage::label, "Vote on instances and auto-label flows"},
      {Stage::train_flow, "Train the flow models (bundle.json)"},
      {Stage::classify, "Classify flows with a bundle (verdicts.jsonl)"},
      {Stage::evaluate, "Cross-validate and write report.txt/report.json"},
      {Stage::cdf, "Export per-class CDF tables of statistical features"}};
  for (const auto& [stage, text] : help) {
    auto* cmd = app.add_subcommand(std::string(to_string(stage)), text);
    add_common(cmd, common);
    stage_cmds.emplace_back(cmd, stage);
  }
  auto* run_cmd = app.add_subcommand("run", "Run every stage in order");
  add_common(run_cmd, common);

  std::string synth_dir;
  std::uint64_t synth_seed = kDefaultSeed;
  std::size_t synth_apps = 120, synth_instances = 4;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus and a run.json for it");
  synth_cmd->add_option("-o,--out", synth_dir, "Corpus directory")->required();
  synth_cmd->add_option("--seed", synth_seed, "Generator seed");
  synth_cmd->add_option("--apps", synth_apps, "Number of apps")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--instances", synth_instances, "Running instances per app")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (synth_cmd->parsed()) return write_synth(synth_dir, synth_seed, synth_apps, synth_instances);
    StageRunner runner(effective_config(common), &std::cerr);
    if (run_cmd->parsed()) {
      runner.run_all();
      return 0;
    }
    for (const auto& [cmd, stage] : stage_cmds) {
      if (cmd->parsed()) runner.run(stage);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "locflow: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "locflow: data error: " << e.what() << "\n";
    return 3;
  } catch (const SchemaError& e) {
    std::cerr << "locflow: model/schema error: " << e.what() << "\n";
    return 4;
  } catch (const TrainingError& e) {
    std::cerr << "locflow: model error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "locflow: " << e.what() << "\n";
    return 1;
  }
}
