#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "locflow/features/flow_vector.hpp"
#include "locflow/learn/logistic.hpp"
#include "locflow/learn/ocsvm.hpp"
#include "locflow/learn/random_forest.hpp"

namespace locflow::tool {

/// Bad configuration or command line; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { supervised, one_class, both };

inline constexpr std::uint64_t kDefaultSeed = 20170605;
inline constexpr const char* kOutDirEnv = "LOCFLOW_OUT_DIR";

struct RunConfig {
  // Inputs. Relative paths in a config file resolve against its directory.
  std::vector<std::filesystem::path> captures;
  std::optional<std::filesystem::path> annotations;
  std::optional<std::filesystem::path> device_ips_file;
  std::set<std::string> device_ips;
  std::optional<std::filesystem::path> contexts;
  std::optional<std::filesystem::path> training_labels;
  std::optional<std::filesystem::path> topics;
  std::optional<std::filesystem::path> hostlist;
  std::optional<std::filesystem::path> ground_truth;
  std::optional<std::filesystem::path> classify_flows;  // defaults to the sessionized flows
  std::filesystem::path out_dir = "locflow-out";

  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;
  RunMode mode = RunMode::both;
  features::FeatureSet features = features::FeatureSet::both;

  double idle_timeout = 60.0;
  std::size_t folds = 10;
  double one_class_train_fraction = 0.8;
  std::size_t min_lexical_rows = 2;
  std::size_t info_gain_top = 15;
  std::vector<std::string> cdf_selectors{"tcp_count", "size_down_max", "interval_mean"};

  double nb_smoothing = 1.0;
  learn::LogisticConfig logistic;
  learn::ForestConfig forest;
  learn::OcsvmConfig ocsvm;

  /// Seeded forest config for a given purpose so every stochastic component
  /// follows --seed.
  learn::ForestConfig forest_for(std::uint64_t stream) const;
};

std::string_view to_string(RunMode mode);
RunMode run_mode_from_string(std::string_view text);

/// Reads a JSON RunConfig. Throws UsageError on unknown keys or bad values.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);
/// Canonical JSON of the effective configuration (for manifests).
std::string dump_run_config(const RunConfig& config);

}  // namespace locflow::tool
