// Acceptance harness: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Criteria 6-8 share one synthetic corpus and two full runs.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "locflow/capture/coordinates.hpp"
#include "locflow/capture/flow_io.hpp"
#include "locflow/common/atomic_file.hpp"
#include "locflow/common/random.hpp"
#include "locflow/context/app_context.hpp"
#include "locflow/eval/metrics.hpp"
#include "locflow/features/lexical.hpp"
#include "locflow/features/stat_features.hpp"
#include "locflow/learn/logistic.hpp"
#include "locflow/learn/naive_bayes.hpp"
#include "locflow/learn/ocsvm.hpp"
#include "locflow/learn/random_forest.hpp"
#include "locflow/pipeline/bundle.hpp"
#include "locflow/pipeline/context_model.hpp"
#include "locflow/synth/corpus.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "stages.hpp"

namespace fs = std::filesystem;
using namespace locflow;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(digits);
  o << v;
  return o.str();
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Outcome metric_arithmetic() {
  const auto m = eval::metrics(eval::BinaryCounts{151, 9, 30, 130});
  const double acc = eval::accuracy(eval::BinaryCounts{506, 7, 29, 460});
  const bool ok = near(m.tp_rate, 0.944, 0.0005) && near(m.precision, 0.834, 0.0005) &&
                  near(m.f_measure, 0.886, 0.0005) && near(acc, 0.964, 0.0005);
  return {ok, "TPR " + fmt(m.tp_rate) + ", precision " + fmt(m.precision) + ", F " + fmt(m.f_measure) + ", accuracy " +
                  fmt(acc)};
}

Outcome stat_oracle() {
  Rng rng(20170605);
  double worst = 0.0;
  bool sized = true;
  for (int i = 0; i < 1000; ++i) {
    const auto flow = fixture::random_flow(rng);
    const auto got = features::stat_features(flow);
    const auto want = oracle::brute_force_stats(flow);
    sized = sized && got.values().size() == 31;
    for (std::size_t k = 0; k < 31; ++k)
      worst = std::max(worst, std::abs(got[k] - want[k]) / std::max(1.0, std::abs(want[k])));
  }
  return {sized && worst <= 1e-9, "1000 flows, 31 fields, max scaled error " + (std::ostringstream() << worst).str()};
}

Outcome lexical_fidelity() {
  auto has = [](const std::vector<std::string>& t, const char* w) { return std::find(t.begin(), t.end(), w) != t.end(); };
  const bool ads = has(features::tokenize_url("ads.appsgeyser.com/?&guid=a5141e1d&tlat=38.53203&tlon=-121.759603&p=android&test=1"), "ads");
  const bool weather = has(features::tokenize_url("v.juhe.cn/weather/geo?&lon=-121.750683&lat=38.540323"), "weather");
  const auto a = capture::detect_coordinates("ads.appsgeyser.com/?&guid=a5141e1d&tlat=38.53203&tlon=-121.759603&p=android&test=1");
  const auto b = capture::detect_coordinates("v.juhe.cn/weather/geo?&lon=-121.750683&lat=38.540323");
  const bool coords = a && b && a->lat == 38.53203 && a->lon == -121.759603 && b->lat == 38.540323 && b->lon == -121.750683;
  return {ads && weather && coords, std::string("ads ") + (ads ? "found" : "missing") + ", weather " +
                                        (weather ? "found" : "missing") + ", coordinates " + (coords ? "exact" : "wrong")};
}

learn::LabeledDataset dense(const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& labels,
                            std::vector<std::string> space) {
  std::vector<std::string> names;
  for (std::size_t f = 0; f < rows[0].size(); ++f) names.push_back("f" + std::to_string(f));
  learn::LabeledDataset d(learn::Vocabulary(names), std::move(space));
  for (std::size_t i = 0; i < rows.size(); ++i) d.add_row(rows[i], labels[i]);
  return d;
}

Outcome learner_oracles() {
  std::vector<std::string> notes;
  bool ok = true;

  // Naive Bayes against exact fractions (see the unit test for the derivation).
  {
    auto d = dense({{1, 1}, {1, 0}, {1, 1}, {0, 0}, {0, 1}, {0, 0}}, {0, 0, 0, 0, 1, 1}, {"A", "B"});
    auto m = learn::train_naive_bayes(d, 1.0);
    const double a = 4.0 / 6 * (4.0 / 6) * (3.0 / 6), b = 2.0 / 6 * (1.0 / 4) * (2.0 / 4);
    auto p = m.predict(std::vector<double>{1, 0});
    const bool nb = p.label == 0 && near(p.scores[0], a / (a + b), 1e-14);
    ok = ok && nb;
    notes.push_back(std::string("NB ") + (nb ? "exact" : "mismatch"));
  }
  // Logistic gradient against central differences.
  {
    Rng rng(77);
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> labels;
    for (int i = 0; i < 40; ++i) {
      rows.push_back({standard_normal(rng), standard_normal(rng), static_cast<double>(uniform_below(rng, 2))});
      labels.push_back(uniform_below(rng, 2));
    }
    auto d = dense(rows, labels, {"A", "B"});
    std::vector<int> t(labels.begin(), labels.end());
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> w{standard_normal(rng), standard_normal(rng), standard_normal(rng)};
      const double bias = standard_normal(rng), h = 1e-6;
      auto g = learn::binary_logistic_loss(d, t, w, bias, 0.01);
      for (std::size_t j = 0; j < 3; ++j) {
        auto wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        const double num =
            (learn::binary_logistic_loss(d, t, wp, bias, 0.01).loss - learn::binary_logistic_loss(d, t, wm, bias, 0.01).loss) / (2 * h);
        worst = std::max(worst, std::abs(num - g.weight_gradient[j]) / std::max(1e-8, std::abs(num)));
      }
    }
    ok = ok && worst <= 1e-4;
    notes.push_back("LR grad rel err " + fmt(worst, 8));
  }
  // Single tree against the CART oracle.
  {
    Rng rng(4);
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> labels;
    for (int i = 0; i < 20; ++i) {
      const double a = static_cast<double>(uniform_below(rng, 10)), b = static_cast<double>(uniform_below(rng, 2));
      const double c = std::round(standard_normal(rng) * 10) / 10;
      rows.push_back({a, b, c});
      labels.push_back(a > 6 ? 2 : (b > 0 ? 1 : (c > 0.3 ? 2 : 0)));
    }
    auto d = dense(rows, labels, {"x", "y", "z"});
    learn::ForestConfig cfg;
    cfg.n_trees = 1;
    cfg.bootstrap = learn::BootstrapMode::none;
    cfg.max_features = 3;
    auto forest = learn::train_random_forest(d, cfg);
    oracle::CartTree cart(rows, labels, 3);
    bool same = forest.trees[0].nodes.size() == cart.node_count();
    for (int probe = 0; probe < 500 && same; ++probe) {
      std::vector<double> q{uniform_unit(rng) * 10, uniform_unit(rng) * 1.2, standard_normal(rng)};
      same = forest.predict(q).label == cart.predict(q);
    }
    for (std::size_t i = 0; i < rows.size() && same; ++i) same = forest.predict(rows[i]).label == cart.predict(rows[i]);
    ok = ok && same;
    notes.push_back(std::string("RF tree ") + (same ? "= CART" : "!= CART"));
  }
  // OCSVM feasibility and the nu band.
  {
    Rng rng(99);
    std::vector<std::vector<double>> rows(200, std::vector<double>(2));
    for (auto& r : rows)
      for (auto& x : r) x = standard_normal(rng);
    auto d = dense(rows, std::vector<std::size_t>(200, 0), {"in"});
    auto m = learn::train_ocsvm(d);
    double sum = 0;
    bool box = true;
    for (double a : m.coefficients) {
      sum += a;
      box = box && a >= 0 && a <= 1.0 / (0.1 * 200) + 1e-15;
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < 200; ++i) out += m.decision(d.row(i)) < 0;
    const double frac = static_cast<double>(out) / 200;
    const bool oc = box && std::abs(sum - 1) <= 1e-8 && frac >= 0.05 && frac <= 0.12;
    ok = ok && oc;
    notes.push_back("OCSVM |sum-1| " + fmt(std::abs(sum - 1), 12) + ", outliers " + fmt(frac, 3));
  }
  std::string detail;
  for (auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
  return {ok, detail};
}

Outcome consensus_voting() {
  std::vector<context::AppContext> ctx;
  for (int i = 0; i < 100; ++i) ctx.push_back({"i" + std::to_string(i), "app", "", "tools", {}, {}});
  auto id = [](const context::AppContext& c) { return std::stoi(c.instance_id.substr(1)); };
  auto truth = [&](const context::AppContext& c) { return id(c) % 4 == 0 ? std::string("unexpected") : std::string("expected"); };
  auto other = [](const std::string& s) { return s == "expected" ? std::string("unexpected") : std::string("expected"); };
  // Instances 90..99 get one dissenting voter; 0..4 are unanimously wrong.
  auto rf = [&](const context::AppContext& c) { return id(c) < 5 ? other(truth(c)) : truth(c); };
  auto nb = [&](const context::AppContext& c) { return id(c) < 5 || (id(c) >= 90 && id(c) % 2) ? other(truth(c)) : truth(c); };
  auto lr = [&](const context::AppContext& c) { return id(c) < 5 || (id(c) >= 90 && id(c) % 2 == 0) ? other(truth(c)) : truth(c); };
  const auto labels = pipeline::label_instances(ctx, rf, nb, lr);
  std::size_t filtered = 0, kept = 0, correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].verdict == pipeline::InstanceVerdict::filtered) {
      ++filtered;
      continue;
    }
    ++kept;
    correct += std::string(pipeline::to_string(labels[i].verdict)) == truth(ctx[i]);
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(kept);
  const double hand = 85.0 / 90.0;
  return {filtered == 10 && acc == hand,
          std::to_string(filtered) + " filtered, retained accuracy " + fmt(acc) + " (hand count 85/90)"};
}

// Shared state for the end-to-end criteria.
struct EndToEnd {
  fs::path corpus_dir;
  tool::RunConfig config;
  fs::path run_a, run_b;
  double seconds_a = 0;
  std::string error;
};

tool::RunConfig corpus_config(const fs::path& dir, const fs::path& out) {
  using F = synth::CorpusFiles;
  tool::RunConfig c;
  c.captures = {dir / F::capture};
  c.annotations = dir / F::annotations;
  c.device_ips_file = dir / F::device_ips;
  c.contexts = dir / F::contexts;
  c.training_labels = dir / F::training_labels;
  c.topics = dir / F::topics;
  c.hostlist = dir / F::hostlist;
  c.ground_truth = dir / F::ground_truth;
  c.out_dir = out;
  c.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return c;
}

EndToEnd& end_to_end() {
  static EndToEnd e = [] {
    EndToEnd s;
    const auto root = fixture::temp_dir("acceptance");
    s.corpus_dir = root / "corpus";
    s.run_a = root / "run-a";
    s.run_b = root / "run-b";
    try {
      synth::write_corpus(synth::generate_corpus({}), s.corpus_dir);
      s.config = corpus_config(s.corpus_dir, s.run_a);
      const auto t0 = std::chrono::steady_clock::now();
      tool::StageRunner(s.config).run_all();
      s.seconds_a = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      auto b = s.config;
      b.out_dir = s.run_b;
      tool::StageRunner(b).run_all();
    } catch (const std::exception& ex) {
      s.error = ex.what();
    }
    return s;
  }();
  return e;
}

Outcome synthetic_end_to_end() {
  auto& e = end_to_end();
  if (!e.error.empty()) return {false, "pipeline error: " + e.error};
  const auto report = nlohmann::json::parse(read_file(e.run_a / tool::Artifacts::report_json));
  std::map<std::string, nlohmann::json> by_name;
  for (const auto& ev : report["evaluations"]) by_name[ev["name"].get<std::string>()] = ev;
  const double both = by_name["rf-both"]["weighted"]["f_measure"].get<double>();
  const double stat = by_name["rf-statistical"]["weighted"]["f_measure"].get<double>();
  double one_class = 0;
  for (const auto& c : by_name["ocsvm-both"]["per_class"])
    if (c["label"] == "illegal-loc") one_class = c["f_measure"].get<double>();
  const bool ok = both >= 0.90 && stat >= 0.80 && one_class >= 0.80 && e.seconds_a < 300;
  return {ok, "weighted F both " + fmt(both) + ", statistical " + fmt(stat) + ", one-class F " + fmt(one_class) +
                  ", run " + fmt(e.seconds_a, 1) + " s"};
}

Outcome testing_stage_purity() {
  auto& e = end_to_end();
  if (!e.error.empty()) return {false, "pipeline error: " + e.error};
  // Mutate every field of every context.
  std::ifstream cin(*e.config.contexts);
  auto contexts = context::read_app_contexts(cin);
  auto mutated = contexts;
  for (auto& c : mutated) {
    c.app_name = "Zz" + c.app_name + "Mutant";
    c.description = "nothing to see here " + c.description;
    c.market_category = "mutated-" + c.market_category;
    c.ui_texts = {"totally different window", "Paris"};
    c.clickable_labels = {"Tokyo"};
  }
  // Stage level: classify against the same bundle with the mutated context file.
  const auto c_dir = e.run_a.parent_path() / "run-c";
  fs::remove_all(c_dir);
  fs::copy(e.run_a, c_dir, fs::copy_options::recursive);
  fs::remove(c_dir / tool::Artifacts::verdicts);
  {
    std::ostringstream out;
    context::write_app_contexts(out, mutated);
    write_file_atomic(c_dir / "contexts_mutated.jsonl", out.str());
  }
  auto cfg = e.config;
  cfg.out_dir = c_dir;
  cfg.contexts = c_dir / "contexts_mutated.jsonl";
  tool::StageRunner(cfg).run(tool::Stage::classify);
  const bool stage_same =
      read_file(c_dir / tool::Artifacts::verdicts) == read_file(e.run_a / tool::Artifacts::verdicts);

  // Library level: swap in voters trained on the mutated contexts and scrub
  // instance ids and taint from the flows.
  auto bundle = pipeline::load_bundle(read_file(e.run_a / tool::Artifacts::bundle));
  std::ifstream lin(*e.config.training_labels);
  const auto training = pipeline::read_instance_labels(lin);
  const auto topics = context::load_topic_config(*e.config.topics);
  pipeline::ContextModelConfig ccfg;
  ccfg.forest.n_trees = 10;
  auto mutated_bundle = bundle;
  mutated_bundle.context = pipeline::train_context_voters(mutated, training, topics, ccfg);
  std::ifstream fin(e.run_a / tool::Artifacts::flows);
  const auto flows = capture::read_flow_records(fin);
  std::size_t differing = 0;
  for (const auto& f : flows) {
    auto g = f;
    g.source_instance_id = "mutated";
    g.taint_location = !f.taint_location.value_or(false);
    differing += !(pipeline::classify_flow(bundle, f) == pipeline::classify_flow(mutated_bundle, g));
  }
  return {stage_same && differing == 0, std::to_string(flows.size()) + " flows, " + std::to_string(differing) +
                                            " verdicts changed, verdict file " + (stage_same ? "identical" : "differs")};
}

Outcome determinism() {
  auto& e = end_to_end();
  if (!e.error.empty()) return {false, "pipeline error: " + e.error};
  std::size_t compared = 0;
  std::vector<std::string> diffs;
  for (const auto& entry : fs::directory_iterator(e.run_a)) {
    const auto name = entry.path().filename().string();
    if (name.ends_with(".manifest.json")) continue;
    ++compared;
    if (!fs::exists(e.run_b / name) || read_file(entry.path()) != read_file(e.run_b / name)) diffs.push_back(name);
  }
  std::string detail = std::to_string(compared) + " artifacts compared";
  for (auto& d : diffs) detail += ", differs: " + d;
  return {diffs.empty() && compared >= 10, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"metric arithmetic", metric_arithmetic},
      {"statistical featurizer oracle", stat_oracle},
      {"lexical fidelity", lexical_fidelity},
      {"learner oracles", learner_oracles},
      {"consensus voting", consensus_voting},
      {"synthetic end-to-end", synthetic_end_to_end},
      {"testing-stage purity", testing_stage_purity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << " ["
              << fmt(ms, 0) << " ms]" << std::endl;
  }
  return failed ? 1 : 0;
}
