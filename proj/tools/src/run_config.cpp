#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "locflow/common/atomic_file.hpp"
#include "locflow/common/random.hpp"

namespace locflow::tool {

using json = nlohmann::json;

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::supervised:
      return "supervised";
    case RunMode::one_class:
      return "one-class";
    case RunMode::both:
      return "both";
  }
  return "both";
}

RunMode run_mode_from_string(std::string_view text) {
  if (text == "supervised") return RunMode::supervised;
  if (text == "one-class") return RunMode::one_class;
  if (text == "both") return RunMode::both;
  throw UsageError("unknown mode '" + std::string(text) + "' (expected supervised, one-class or both)");
}

learn::ForestConfig RunConfig::forest_for(std::uint64_t stream) const {
  auto f = forest;
  f.seed = derive_seed(seed, stream);
  f.jobs = jobs;
  return f;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "captures", "annotations", "device_ips", "contexts", "training_labels", "topics", "hostlist", "ground_truth",
      "classify_flows", "out_dir", "seed", "jobs", "mode", "features", "idle_timeout", "folds",
      "one_class_train_fraction", "min_lexical_rows", "info_gain_top", "cdf_selectors", "naive_bayes", "logistic",
      "forest", "ocsvm"};
  return keys;
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw UsageError("run config: unknown key '" + where + key + "'");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("run config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("run config must be a JSON object");
  check_keys(j, known_keys(), "");

  RunConfig c;
  try {
    auto opt_path = [&](const char* key, std::optional<std::filesystem::path>& out) {
      if (j.contains(key) && !j[key].is_null()) out = resolve(base_dir, j[key].get<std::string>());
    };
    if (j.contains("captures")) {
      const auto& v = j["captures"];
      if (v.is_string()) c.captures.push_back(resolve(base_dir, v.get<std::string>()));
      else
        for (const auto& p : v) c.captures.push_back(resolve(base_dir, p.get<std::string>()));
    }
    opt_path("annotations", c.annotations);
    if (j.contains("device_ips")) {
      const auto& v = j["device_ips"];
      if (v.is_string()) c.device_ips_file = resolve(base_dir, v.get<std::string>());
      else
        for (const auto& ip : v) c.device_ips.insert(ip.get<std::string>());
    }
    opt_path("contexts", c.contexts);
    opt_path("training_labels", c.training_labels);
    opt_path("topics", c.topics);
    opt_path("hostlist", c.hostlist);
    opt_path("ground_truth", c.ground_truth);
    opt_path("classify_flows", c.classify_flows);
    if (j.contains("out_dir")) c.out_dir = resolve(base_dir, j["out_dir"].get<std::string>());

    c.seed = j.value("seed", c.seed);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("mode")) c.mode = run_mode_from_string(j["mode"].get<std::string>());
    if (j.contains("features")) {
      try {
        c.features = features::feature_set_from_string(j["features"].get<std::string>());
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
    }
    c.idle_timeout = j.value("idle_timeout", c.idle_timeout);
    c.folds = j.value("folds", c.folds);
    c.one_class_train_fraction = j.value("one_class_train_fraction", c.one_class_train_fraction);
    c.min_lexical_rows = j.value("min_lexical_rows", c.min_lexical_rows);
    c.info_gain_top = j.value("info_gain_top", c.info_gain_top);
    c.cdf_selectors = j.value("cdf_selectors", c.cdf_selectors);

    if (j.contains("naive_bayes")) {
      check_keys(j["naive_bayes"], {"smoothing"}, "naive_bayes.");
      c.nb_smoothing = j["naive_bayes"].value("smoothing", c.nb_smoothing);
    }
    if (j.contains("logistic")) {
      const auto& l = j["logistic"];
      check_keys(l, {"learning_rate", "epochs", "l2"}, "logistic.");
      c.logistic.learning_rate = l.value("learning_rate", c.logistic.learning_rate);
      c.logistic.epochs = l.value("epochs", c.logistic.epochs);
      c.logistic.l2 = l.value("l2", c.logistic.l2);
    }
    if (j.contains("forest")) {
      const auto& f = j["forest"];
      check_keys(f, {"n_trees", "max_depth", "min_leaf", "max_features"}, "forest.");
      c.forest.n_trees = f.value("n_trees", c.forest.n_trees);
      c.forest.max_depth = f.value("max_depth", c.forest.max_depth);
      c.forest.min_leaf = f.value("min_leaf", c.forest.min_leaf);
      c.forest.max_features = f.value("max_features", c.forest.max_features);
    }
    if (j.contains("ocsvm")) {
      const auto& o = j["ocsvm"];
      check_keys(o, {"nu", "gamma"}, "ocsvm.");
      c.ocsvm.nu = o.value("nu", c.ocsvm.nu);
      c.ocsvm.gamma = o.value("gamma", c.ocsvm.gamma);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("run config: ") + e.what());
  }

  if (c.jobs < 1) throw UsageError("run config: jobs must be >= 1");
  if (c.folds < 2) throw UsageError("run config: folds must be >= 2");
  if (!(c.idle_timeout > 0)) throw UsageError("run config: idle_timeout must be positive");
  if (!(c.one_class_train_fraction > 0 && c.one_class_train_fraction < 1))
    throw UsageError("run config: one_class_train_fraction must be in (0, 1)");
  if (!(c.ocsvm.nu > 0 && c.ocsvm.nu < 1)) throw UsageError("run config: ocsvm.nu must be in (0, 1)");
  if (c.ocsvm.gamma < 0) throw UsageError("run config: ocsvm.gamma must be >= 0 (0 = 1/features)");
  if (c.forest.n_trees < 1 || c.forest.min_leaf < 1) throw UsageError("run config: forest sizes must be >= 1");
  if (!(c.nb_smoothing > 0)) throw UsageError("run config: naive_bayes.smoothing must be positive");
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read run config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.parent_path());
}

std::string dump_run_config(const RunConfig& c) {
  auto opt = [](const std::optional<std::filesystem::path>& p) { return p ? json(p->string()) : json(nullptr); };
  json captures = json::array();
  for (const auto& p : c.captures) captures.push_back(p.string());
  json j = {{"captures", captures},
            {"annotations", opt(c.annotations)},
            {"contexts", opt(c.contexts)},
            {"training_labels", opt(c.training_labels)},
            {"topics", opt(c.topics)},
            {"hostlist", opt(c.hostlist)},
            {"ground_truth", opt(c.ground_truth)},
            {"classify_flows", opt(c.classify_flows)},
            {"out_dir", c.out_dir.string()},
            {"seed", c.seed},
            {"jobs", c.jobs},
            {"mode", to_string(c.mode)},
            {"features", features::to_string(c.features)},
            {"idle_timeout", c.idle_timeout},
            {"folds", c.folds},
            {"one_class_train_fraction", c.one_class_train_fraction},
            {"min_lexical_rows", c.min_lexical_rows},
            {"info_gain_top", c.info_gain_top},
            {"cdf_selectors", c.cdf_selectors},
            {"naive_bayes", {{"smoothing", c.nb_smoothing}}},
            {"logistic", {{"learning_rate", c.logistic.learning_rate}, {"epochs", c.logistic.epochs}, {"l2", c.logistic.l2}}},
            {"forest",
             {{"n_trees", c.forest.n_trees},
              {"max_depth", c.forest.max_depth},
              {"min_leaf", c.forest.min_leaf},
              {"max_features", c.forest.max_features}}},
            {"ocsvm", {{"nu", c.ocsvm.nu}, {"gamma", c.ocsvm.gamma}}}};
  if (c.device_ips_file) j["device_ips"] = c.device_ips_file->string();
  else j["device_ips"] = c.device_ips;
  return j.dump(2) + "\n";
}

}  // namespace locflow::tool
