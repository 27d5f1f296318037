#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "locflow/common/errors.hpp"
#include "locflow/pipeline/bundle.hpp"
#include "locflow/pipeline/context_model.hpp"
#include "locflow/pipeline/flow_dataset.hpp"
#include "locflow/pipeline/flow_labels.hpp"
#include "locflow/pipeline/hostname_list.hpp"
#include "locflow/pipeline/instance_labels.hpp"
#include "locflow/pipeline/voting.hpp"
#include "locflow/synth/corpus.hpp"

using namespace locflow;
using namespace locflow::pipeline;
using capture::Direction;

namespace {

capture::HttpFlow make_flow(double t0, std::string host, std::string path, std::optional<std::string> instance,
                            int packets = 3, std::uint32_t down = 600, double gap = 0.05) {
  capture::HttpFlow f;
  f.key = {"10.0.0.2", static_cast<std::uint16_t>(40000 + static_cast<int>(t0) % 20000), "1.2.3.4", 80};
  for (int i = 0; i < packets; ++i)
    f.packets.push_back(fixture::packet(t0 + i * gap, i == 0 ? Direction::uplink : Direction::downlink, i == 0 ? 300 : down, i == 0));
  for (auto& p : f.packets) p.four_tuple = p.direction == Direction::uplink ? f.key : f.key.reversed();
  f.requests = {fixture::request(host, path)};
  f.source_instance_id = std::move(instance);
  return f;
}

std::vector<InstanceLabel> verdicts(std::initializer_list<std::pair<const char*, InstanceVerdict>> v) {
  std::vector<InstanceLabel> out;
  for (auto& [id, verdict] : v) out.push_back({id, verdict});
  return out;
}

// Training set where each class has a distinct traffic and URL shape.
std::pair<std::vector<FlowVector>, std::vector<FlowLabel>> three_class_set(std::size_t per_class) {
  std::vector<capture::HttpFlow> flows;
  std::vector<FlowLabel> labels;
  for (std::size_t i = 0; i < per_class; ++i) {
    const double t = 100.0 * static_cast<double>(i);
    flows.push_back(make_flow(t, "api.weather.com", "/now?lat=1.5&lon=2.5", "e", 2, 400, 0.8));
    labels.push_back({flows.back().id(), FlowClass::legal_loc});
    flows.push_back(make_flow(t + 10, "ads.tracker.net", "/t?tlat=1.5&tlon=2.5&id=" + std::to_string(i), "u", 4, 1460, 0.01));
    labels.push_back({flows.back().id(), FlowClass::illegal_loc});
    flows.push_back(make_flow(t + 20, "img.cdn.com", "/a/b.jpg", "e", 30 + static_cast<int>(i % 5), 1460, 0.004));
    labels.push_back({flows.back().id(), FlowClass::non_loc});
  }
  return {flow_vectors(flows, features::FeatureSet::both), labels};
}

}  // namespace

TEST(Voting, Consensus) {
  EXPECT_EQ(consensus_vote<std::string>("unexpected", "unexpected", "unexpected"), "unexpected");
  EXPECT_FALSE(consensus_vote<std::string>("unexpected", "expected", "unexpected"));
}

TEST(LabelInstances, EngineeredDisagreements) {
  std::vector<context::AppContext> ctx;
  for (int i = 0; i < 100; ++i) ctx.push_back({"i" + std::to_string(i), "app", "", "tools", {}, {}});
  auto truth = [](const context::AppContext& c) { return std::stoi(c.instance_id.substr(1)) % 3 ? std::string("expected") : std::string("unexpected"); };
  auto flip = [&](const context::AppContext& c) {
    const int n = std::stoi(c.instance_id.substr(1));
    auto t = truth(c);
    return n % 10 == 4 ? (t == "expected" ? std::string("unexpected") : std::string("expected")) : t;
  };
  auto labels = label_instances(ctx, truth, flip, truth);
  ASSERT_EQ(labels.size(), 100u);
  std::size_t filtered = 0;
  for (auto& l : labels) filtered += l.verdict == InstanceVerdict::filtered;
  EXPECT_EQ(filtered, 10u);
  EXPECT_TRUE(label_instances({}, truth, truth, truth).empty());
  for (auto& l : label_instances(ctx, truth, truth, truth)) EXPECT_NE(l.verdict, InstanceVerdict::filtered);
}

TEST(InstanceLabels, RoundTripAndErrors) {
  auto v = verdicts({{"a", InstanceVerdict::expected}, {"b", InstanceVerdict::filtered}});
  std::stringstream ss;
  write_instance_labels(ss, v);
  EXPECT_EQ(read_instance_labels(ss), v);
  EXPECT_THROW(instance_verdict_from_string("maybe"), DataError);
  std::stringstream dup;
  write_instance_labels(dup, {v[0], v[0]});
  EXPECT_THROW(read_instance_labels(dup), DataError);
}

TEST(IsLocationFlow, Rules) {
  auto f = make_flow(0, "img.cdn.com", "/a.jpg", std::nullopt);
  EXPECT_FALSE(is_location_flow(f));
  f.taint_location = true;
  EXPECT_TRUE(is_location_flow(f));
  auto j = make_flow(0, "v.juhe.cn", "/weather/geo?&lon=-121.750683&lat=38.540323", std::nullopt);
  EXPECT_TRUE(is_location_flow(j));
}

TEST(HostnameListTest, SuffixOnLabelBoundaries) {
  auto h = HostnameList::parse("# ads\ntracker.example\n\nX.COM  # trailing\n");
  EXPECT_TRUE(h.matches("ads.tracker.example"));
  EXPECT_TRUE(h.matches("tracker.example"));
  EXPECT_TRUE(h.matches("a.x.com:8080"));
  EXPECT_FALSE(h.matches("badtracker.example"));
  EXPECT_FALSE(h.matches("example"));
  EXPECT_EQ(h.entries().size(), 2u);
  EXPECT_THROW(HostnameList::parse("http://x.com/"), DataError);
  EXPECT_THROW(HostnameList::parse("x.com/path"), DataError);
  EXPECT_EQ(normalize_host("Ads.X.com.:80"), "ads.x.com");
}

TEST(AutoLabel, ReferenceRules) {
  std::vector<capture::HttpFlow> flows{
      make_flow(1, "own.app.com", "/?lat=10.5&lon=20.5", "u1"),
      make_flow(2, "ads.tracker.example", "/?lat=10.5&lon=20.5", "e1"),
      make_flow(3, "own.app.com", "/?lat=10.5&lon=20.5", "e1"),
      make_flow(4, "img.cdn.com", "/x.png", "u1"),
      make_flow(5, "own.app.com", "/?lat=10.5&lon=20.5", "f1"),
      make_flow(6, "own.app.com", "/?lat=10.5&lon=20.5", std::nullopt),
      make_flow(7, "img.cdn.com", "/x.png", std::nullopt),
  };
  auto inst = verdicts({{"u1", InstanceVerdict::unexpected}, {"e1", InstanceVerdict::expected}, {"f1", InstanceVerdict::filtered}});
  auto res = auto_label_flows(flows, inst, HostnameList::parse("tracker.example"));
  ASSERT_EQ(res.labels.size(), 5u);
  EXPECT_EQ(res.labels[0].cls, FlowClass::illegal_loc);
  EXPECT_EQ(res.labels[1].cls, FlowClass::illegal_loc);
  EXPECT_EQ(res.labels[2].cls, FlowClass::legal_loc);
  EXPECT_EQ(res.labels[3].cls, FlowClass::non_loc);
  EXPECT_EQ(res.labels[4].cls, FlowClass::non_loc);
  EXPECT_EQ(res.labels[4].flow_id, flows[6].id());
  EXPECT_EQ(res.dropped_filtered, 1u);
  EXPECT_EQ(res.dropped_unresolved, 1u);
}

TEST(AutoLabel, GrowingHostlistNeverDemotesIllegal) {
  std::vector<capture::HttpFlow> flows;
  std::vector<InstanceLabel> inst;
  const char* hosts[] = {"a.ads.com", "b.track.io", "own.app.com", "cdn.img.net"};
  for (int i = 0; i < 40; ++i) {
    const std::string id = "i" + std::to_string(i % 6);
    flows.push_back(make_flow(i, hosts[i % 4], i % 3 ? "/?lat=1.25&lon=2.25" : "/x", id));
  }
  for (int i = 0; i < 6; ++i) inst.push_back({"i" + std::to_string(i), i % 2 ? InstanceVerdict::expected : InstanceVerdict::unexpected});
  auto small = auto_label_flows(flows, inst, HostnameList::parse("ads.com"));
  auto big = auto_label_flows(flows, inst, HostnameList::parse("ads.com\ntrack.io\napp.com"));
  ASSERT_EQ(small.labels.size(), big.labels.size());
  for (std::size_t i = 0; i < small.labels.size(); ++i) {
    if (small.labels[i].cls == FlowClass::illegal_loc) EXPECT_EQ(big.labels[i].cls, FlowClass::illegal_loc);
  }
}

TEST(FlowLabels, RoundTrip) {
  std::vector<FlowLabel> v{{"a", FlowClass::legal_loc}, {"b", FlowClass::non_loc}};
  std::stringstream ss;
  write_flow_labels(ss, v);
  EXPECT_EQ(read_flow_labels(ss), v);
  EXPECT_EQ(flow_class_from_string("illegal-loc"), FlowClass::illegal_loc);
  EXPECT_THROW(flow_class_from_string("loc"), DataError);
}

TEST(FlowDataset, ModesAndVocabulary) {
  auto [vecs, labels] = three_class_set(1);
  auto sup = build_flow_dataset(vecs, labels, DatasetMode::supervised);
  EXPECT_EQ(sup.rows(), 3u);
  EXPECT_EQ(sup.label_space(), kFlowLabelSpace);
  std::set<std::string> names;
  for (auto& v : vecs)
    for (auto& [n, x] : v.features) names.insert(n);
  for (auto& n : names) EXPECT_LT(sup.vocabulary().index_of(n), sup.vocabulary().size()) << n;

  auto one = build_flow_dataset(vecs, labels, DatasetMode::one_class);
  EXPECT_EQ(one.rows(), 1u);
  EXPECT_EQ(one.label_space()[one.label(0)], "illegal-loc");
}

TEST(FlowDataset, EmptyClassNamed) {
  auto [vecs, labels] = three_class_set(2);
  std::vector<FlowLabel> no_legal;
  for (auto& l : labels)
    if (l.cls != FlowClass::legal_loc) no_legal.push_back(l);
  try {
    build_flow_dataset(vecs, no_legal, DatasetMode::supervised);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("legal-loc"), std::string::npos);
  }
}

TEST(FlowDataset, RarePruningKeepsStatColumns) {
  auto [vecs, labels] = three_class_set(4);
  auto d = build_flow_dataset(vecs, labels, DatasetMode::supervised, nullptr, 2);
  EXPECT_EQ(d.vocabulary().index_of("path:3"), d.vocabulary().size());  // id token seen once
  EXPECT_LT(d.vocabulary().index_of("host:ads"), d.vocabulary().size());
  EXPECT_LT(d.vocabulary().index_of("stat:interval_kurtosis"), d.vocabulary().size());
}

TEST(Bundle, ClassifyMemorizesAndRoundTrips) {
  auto [vecs, labels] = three_class_set(12);
  FlowModelConfig cfg;
  auto bundle = train_flow_models(vecs, labels, cfg);
  bundle.topic_digest = "t";
  bundle.hostlist_digest = "h";
  auto text = dump_bundle(bundle);
  auto back = load_bundle(text);
  EXPECT_EQ(dump_bundle(back), text);

  auto illegal = make_flow(5000, "ads.tracker.net", "/t?tlat=1.5&tlon=2.5&id=3", std::nullopt, 4, 1460, 0.01);
  auto v = classify_flow(back, illegal);
  ASSERT_TRUE(v.supervised_label);
  EXPECT_EQ(*v.supervised_label, "illegal-loc");
  EXPECT_EQ(v.supervised_scores.size(), 3u);
  ASSERT_TRUE(v.one_class_illegal);
  EXPECT_EQ(v, classify_flow(bundle, illegal));
  // With nu = 0.1 at most a couple of the twelve training rows may fall outside.
  int inside = 0;
  for (int i = 0; i < 12; ++i) {
    auto t = make_flow(100.0 * i + 10, "ads.tracker.net", "/t?tlat=1.5&tlon=2.5&id=" + std::to_string(i), "u", 4, 1460, 0.01);
    inside += *classify_flow(back, t).one_class_illegal;
  }
  EXPECT_GE(inside, 10);
  auto cdn = make_flow(7000, "img.cdn.com", "/a/b.jpg", std::nullopt, 32, 1460, 0.004);
  EXPECT_FALSE(*classify_flow(back, cdn).one_class_illegal);

  auto https = illegal;
  https.requests.clear();
  auto hv = classify_flow(back, https);
  EXPECT_TRUE(hv.supervised_label);
  EXPECT_NE(hv.feature_hash, v.feature_hash);
}

TEST(Bundle, ClassifyIgnoresAppLevelFields) {
  auto [vecs, labels] = three_class_set(6);
  auto bundle = train_flow_models(vecs, labels, {});
  auto f = make_flow(9000, "api.weather.com", "/now?lat=1.5&lon=2.5", "e", 2, 400, 0.8);
  auto g = f;
  g.source_instance_id = "someone-else";
  g.taint_location = false;
  EXPECT_EQ(classify_flow(bundle, f), classify_flow(bundle, g));
}

TEST(Bundle, VersionMismatchIsSchemaError) {
  auto [vecs, labels] = three_class_set(6);
  auto text = dump_bundle(train_flow_models(vecs, labels, {}));
  auto bad = text;
  bad.replace(bad.find("locflow.bundle/1"), 16, "locflow.bundle/7");
  EXPECT_THROW(load_bundle(bad), SchemaError);
  auto feat = text;
  feat.replace(feat.find("locflow.features/1"), 18, "locflow.features/2");
  EXPECT_THROW(load_bundle(feat), SchemaError);
  EXPECT_THROW(load_bundle(text.substr(0, text.size() / 3)), SchemaError);
}

TEST(Bundle, VerdictLinesCarrySchema) {
  auto [vecs, labels] = three_class_set(6);
  auto bundle = train_flow_models(vecs, labels, {});
  std::stringstream ss;
  write_verdicts(ss, {classify_flow(bundle, make_flow(1, "a.com", "/", std::nullopt))});
  EXPECT_NE(ss.str().find("locflow.verdict/1"), std::string::npos);
  EXPECT_NE(ss.str().find("feature_hash"), std::string::npos);
}

TEST(ContextModel, TrainsOnSyntheticContextsAndRoundTrips) {
  synth::SynthConfig sc;
  sc.apps = 40;
  auto corpus = synth::generate_corpus(sc);
  ContextModelConfig cfg;
  cfg.forest.n_trees = 20;
  auto voters = train_context_voters(corpus.contexts, corpus.training_labels, corpus.topics, cfg);
  auto labels = label_instances(corpus.contexts, voters, corpus.topics);
  ASSERT_EQ(labels.size(), corpus.contexts.size());
  std::size_t agree = 0, kept = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].verdict == InstanceVerdict::filtered) continue;
    ++kept;
    agree += labels[i].verdict == corpus.true_intentions[i].verdict;
  }
  EXPECT_GT(kept, labels.size() * 8 / 10);
  EXPECT_GT(static_cast<double>(agree) / static_cast<double>(kept), 0.9);

  auto text = dump_context_model(voters);
  auto back = load_context_model(text);
  EXPECT_EQ(dump_context_model(back), text);
  EXPECT_EQ(label_instances(corpus.contexts, back, corpus.topics), labels);

  auto other = corpus.topics;
  other.topics["extra"] = {"zzz"};
  EXPECT_THROW(label_instances(corpus.contexts, back, other), DataError);
  EXPECT_THROW(load_context_model("{\"schema\":\"locflow.context-model/0\"}"), SchemaError);
}

TEST(ContextModel, RejectsBadTrainingLabels) {
  synth::SynthConfig sc;
  sc.apps = 10;
  auto corpus = synth::generate_corpus(sc);
  auto labels = corpus.training_labels;
  labels.push_back({"no-such-instance", InstanceVerdict::expected});
  EXPECT_THROW(train_context_voters(corpus.contexts, labels, corpus.topics), DataError);
  std::vector<InstanceLabel> one_class;
  for (auto& l : corpus.training_labels)
    if (l.verdict == InstanceVerdict::expected) one_class.push_back(l);
  EXPECT_THROW(train_context_voters(corpus.contexts, one_class, corpus.topics), TrainingError);
}
