#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "locflow/common/atomic_file.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string output;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + LOCFLOW_CLI + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) o.output.append(buf, n);
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

const fs::path kSample = fs::path(LOCFLOW_SOURCE_DIR) / "data" / "sample" / "run.json";

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

}  // namespace

TEST(Cli, VersionAndUsage) {
  auto v = run("--version");
  EXPECT_EQ(v.status, 0);
  EXPECT_NE(v.output.find("0.3.0"), std::string::npos);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("no-such-stage").status, 2);
  EXPECT_EQ(run("sessionize --bogus-flag").status, 2);
}

TEST(Cli, SessionizeSampleWritesFlowsAndManifest) {
  const auto out = fixture::temp_dir("cli-sessionize");
  auto r = run("sessionize -c " + kSample.string() + " -o " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_GT(line_count(out / "flows.jsonl"), 0u);
  const auto manifest = locflow::read_file(out / "flows.jsonl.manifest.json");
  for (auto key : {"artifact_digest", "inputs", "seed", "tool_version", "locflow.manifest/1"})
    EXPECT_NE(manifest.find(key), std::string::npos) << key;
}

TEST(Cli, MissingUpstreamNamesStage) {
  const auto out = fixture::temp_dir("cli-upstream");
  auto r = run("featurize -c " + kSample.string() + " -o " + out.string());
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.output.find("sessionize"), std::string::npos) << r.output;
}

TEST(Cli, CorruptedBundleIsSchemaError) {
  const auto out = fixture::temp_dir("cli-bundle");
  for (auto stage : {"sessionize", "featurize", "train-context", "label", "train-flow"}) {
    auto r = run(std::string(stage) + " -c " + kSample.string() + " -o " + out.string());
    ASSERT_EQ(r.status, 0) << stage << ": " << r.output;
  }
  auto text = locflow::read_file(out / "bundle.json");
  text.replace(text.find("locflow.bundle/1"), 16, "locflow.bundle/0");
  locflow::write_file_atomic(out / "bundle.json", text);
  auto r = run("classify -c " + kSample.string() + " -o " + out.string());
  EXPECT_EQ(r.status, 4) << r.output;

  locflow::write_file_atomic(out / "bundle.json", "{ truncated");
  EXPECT_EQ(run("classify -c " + kSample.string() + " -o " + out.string()).status, 4);
}

TEST(Cli, EnvOverridesConfigAndFlagOverridesEnv) {
  const auto env_dir = fixture::temp_dir("cli-env");
  const auto flag_dir = fixture::temp_dir("cli-flag");
  auto a = run("sessionize -c " + kSample.string(), "LOCFLOW_OUT_DIR=" + env_dir.string());
  ASSERT_EQ(a.status, 0) << a.output;
  EXPECT_TRUE(fs::exists(env_dir / "flows.jsonl"));
  auto b = run("sessionize -c " + kSample.string() + " -o " + flag_dir.string(), "LOCFLOW_OUT_DIR=" + env_dir.string());
  ASSERT_EQ(b.status, 0) << b.output;
  EXPECT_TRUE(fs::exists(flag_dir / "flows.jsonl"));
}

TEST(Cli, BadConfigIsUsageError) {
  const auto dir = fixture::temp_dir("cli-config");
  locflow::write_file_atomic(dir / "run.json", R"({"captures": ["x.pcap"], "no_such_key": 1})");
  EXPECT_EQ(run("sessionize -c " + (dir / "run.json").string()).status, 2);
  locflow::write_file_atomic(dir / "empty.json", "{}");
  EXPECT_EQ(run("sessionize -c " + (dir / "empty.json").string() + " -o " + dir.string()).status, 2);
  locflow::write_file_atomic(dir / "missing.json", R"({"captures": ["nope.pcap"]})");
  EXPECT_EQ(run("sessionize -c " + (dir / "missing.json").string() + " -o " + dir.string()).status, 3);
}

TEST(Cli, RerunIsByteIdentical) {
  const auto a = fixture::temp_dir("cli-rerun-a");
  const auto b = fixture::temp_dir("cli-rerun-b");
  for (const auto& dir : {a, b}) {
    for (auto stage : {"sessionize", "featurize", "train-context", "label", "train-flow", "classify"}) {
      auto r = run(std::string(stage) + " -c " + kSample.string() + " -o " + dir.string() + " --seed 7");
      ASSERT_EQ(r.status, 0) << stage << ": " << r.output;
    }
  }
  for (auto name : {"flows.jsonl", "features.tsv", "context_model.json", "instance_verdicts.jsonl", "flow_labels.jsonl",
                    "bundle.json", "verdicts.jsonl"})
    EXPECT_EQ(locflow::read_file(a / name), locflow::read_file(b / name)) << name;
}
