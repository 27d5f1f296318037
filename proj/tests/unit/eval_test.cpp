#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "locflow/common/errors.hpp"
#include "locflow/common/random.hpp"
#include "locflow/eval/cdf.hpp"
#include "locflow/eval/confusion.hpp"
#include "locflow/eval/kfold.hpp"
#include "locflow/eval/metrics.hpp"
#include "locflow/eval/report.hpp"
#include "locflow/features/stat_features.hpp"

using namespace locflow;
using namespace locflow::eval;

namespace {

learn::LabeledDataset numbered(std::size_t n, std::size_t classes) {
  learn::LabeledDataset d(learn::Vocabulary({"id"}), {"a", "b", "c"});
  for (std::size_t i = 0; i < n; ++i) d.add_row(std::vector<double>{static_cast<double>(i)}, i % classes);
  return d;
}

// Remembers every training row exactly; unseen rows get label 0.
Trainer memorizer() {
  return [](const learn::LabeledDataset& train) -> Predictor {
    std::map<double, std::size_t> seen;
    for (std::size_t i = 0; i < train.rows(); ++i) seen[train.value(i, 0)] = train.label(i);
    return [seen](std::span<const double> row) {
      auto it = seen.find(row[0]);
      return it == seen.end() ? std::size_t{0} : it->second;
    };
  };
}

features::StatVector with_tcp(double tcp) {
  features::StatVector::Values v{};
  v[0] = tcp;
  return features::StatVector(v);
}

}  // namespace

TEST(Metrics, PublishedBinaryCounts) {
  auto m = metrics(BinaryCounts{151, 9, 30, 130});
  EXPECT_NEAR(m.tp_rate, 0.944, 0.0005);
  EXPECT_NEAR(m.precision, 0.834, 0.0005);
  EXPECT_NEAR(m.f_measure, 0.886, 0.0005);
  EXPECT_NEAR(m.fp_rate, 30.0 / 160.0, 1e-15);
  EXPECT_FALSE(m.degenerate());
}

TEST(Metrics, PublishedAccuracy) { EXPECT_NEAR(accuracy(BinaryCounts{506, 7, 29, 460}), 0.964, 0.0005); }

TEST(Metrics, PerfectClassifier) {
  auto m = metrics(BinaryCounts{10, 0, 0, 5});
  EXPECT_EQ(m.tp_rate, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.f_measure, 1.0);
  EXPECT_EQ(m.fp_rate, 0.0);
}

TEST(Metrics, ZeroDenominatorsFlagged) {
  auto m = metrics(BinaryCounts{0, 0, 0, 7});
  EXPECT_EQ(m.tp_rate, 0.0);
  EXPECT_TRUE(m.tp_rate_degenerate);
  EXPECT_TRUE(m.precision_degenerate);
  EXPECT_TRUE(m.f_measure_degenerate);
  EXPECT_FALSE(m.fp_rate_degenerate);
  EXPECT_TRUE(metrics(BinaryCounts{3, 1, 0, 0}).fp_rate_degenerate);
}

TEST(Metrics, HarmonicMeanAndDuplicationInvariance) {
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    BinaryCounts c{1 + uniform_below(rng, 100), uniform_below(rng, 100), uniform_below(rng, 100), uniform_below(rng, 100)};
    auto m = metrics(c);
    EXPECT_NEAR(m.f_measure, 2 * m.precision * m.tp_rate / (m.precision + m.tp_rate), 1e-12);
    auto d = metrics(BinaryCounts{c.tp * 2, c.fn * 2, c.fp * 2, c.tn * 2});
    EXPECT_EQ(d.tp_rate, m.tp_rate);
    EXPECT_EQ(d.fp_rate, m.fp_rate);
    EXPECT_EQ(d.precision, m.precision);
    EXPECT_EQ(d.f_measure, m.f_measure);
  }
}

TEST(Confusion, OneVsRestReduction) {
  ConfusionMatrix cm({"a", "b", "c"});
  cm.add(0, 0, 5);
  cm.add(0, 1, 2);
  cm.add(1, 0, 1);
  cm.add(2, 2, 4);
  auto c = one_vs_rest(cm, 0);
  EXPECT_EQ(c.tp, 5u);
  EXPECT_EQ(c.fn, 2u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.tn, 4u);
  EXPECT_EQ(cm.total(), 12u);
  EXPECT_NEAR(accuracy(cm), 9.0 / 12.0, 1e-15);
  ConfusionMatrix other({"a", "b", "c"});
  other.add(2, 1);
  cm.merge(other);
  EXPECT_EQ(cm.actual_total(2), 5u);
}

TEST(KFold, LeaveOneOutWithMemorizerIsPerfectOnDuplicates) {
  // Every value appears twice so leaving one out still leaves its twin.
  learn::LabeledDataset d(learn::Vocabulary({"id"}), {"a", "b"});
  for (int i = 0; i < 10; ++i)
    for (int r = 0; r < 2; ++r) d.add_row(std::vector<double>{static_cast<double>(i)}, i % 2);
  auto res = kfold(d, memorizer(), {.k = 10, .seed = 1});
  EXPECT_EQ(accuracy(res.confusion), 1.0);
}

TEST(KFold, PartitionAndConservation) {
  auto d = numbered(90, 3);
  for (std::uint64_t seed : {1ULL, 2ULL}) {
    auto res = kfold(d, memorizer(), {.k = 10, .seed = seed, .jobs = 3});
    EXPECT_EQ(res.confusion.total(), d.rows());
    ASSERT_EQ(res.fold.size(), d.rows());
    std::vector<std::size_t> per_fold(10, 0);
    for (auto f : res.fold) ++per_fold[f];
    for (auto c : per_fold) EXPECT_EQ(c, 9u);
    // The memorizer never saw the held-out row, so its prediction falls back to 0.
    for (std::size_t i = 0; i < d.rows(); ++i) EXPECT_EQ(res.prediction[i], 0u);
  }
  EXPECT_NE(stratified_folds(d, 10, 1), stratified_folds(d, 10, 2));
}

TEST(KFold, StratifiedFoldsBalanceClasses) {
  auto d = numbered(60, 3);
  auto folds = stratified_folds(d, 5, 7);
  std::map<std::pair<std::size_t, std::size_t>, int> count;
  for (std::size_t i = 0; i < d.rows(); ++i) ++count[{folds[i], d.label(i)}];
  for (auto& [k, c] : count) EXPECT_EQ(c, 4);
}

TEST(KFold, TruthOverridesScoringOnly) {
  auto d = numbered(30, 3);
  std::vector<std::size_t> truth(d.rows(), 2);
  auto res = kfold(d, memorizer(), {.k = 3, .seed = 1, .truth = truth});
  EXPECT_EQ(res.confusion.actual_total(2), 30u);
}

TEST(KFold, SmallClassIsError) {
  auto d = numbered(12, 3);  // 4 per class
  try {
    kfold(d, memorizer(), {.k = 5});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("a"), std::string::npos);
  }
  EXPECT_THROW(stratified_folds(d, 1, 0), DataError);
}

TEST(Cdf, SingleStepPerClass) {
  std::vector<features::StatVector> rows{with_tcp(3), with_tcp(7), with_tcp(50)};
  std::vector<std::string> labels{"legal-loc", "illegal-loc", "non-loc"};
  std::vector<std::string> space{"legal-loc", "illegal-loc", "non-loc"};
  auto cdfs = cdf_export(rows, labels, space, "tcp_count");
  ASSERT_EQ(cdfs.size(), 3u);
  for (auto& c : cdfs) {
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_EQ(c.points[0].fraction, 1.0);
  }
  EXPECT_EQ(cdfs[2].points[0].value, 50);
}

TEST(Cdf, DuplicatesCollapseAndEmptyFlagged) {
  std::vector<features::StatVector> rows{with_tcp(2), with_tcp(2), with_tcp(5), with_tcp(9)};
  std::vector<std::string> labels{"x", "x", "x", "x"};
  std::vector<std::string> space{"x", "y"};
  auto cdfs = cdf_export(rows, labels, space, "tcp_count");
  ASSERT_EQ(cdfs[0].points.size(), 3u);
  EXPECT_EQ(cdfs[0].points[0].value, 2);
  EXPECT_EQ(cdfs[0].points[0].fraction, 0.5);
  EXPECT_EQ(cdfs[0].points[2].fraction, 1.0);
  for (std::size_t i = 1; i < cdfs[0].points.size(); ++i) EXPECT_GE(cdfs[0].points[i].fraction, cdfs[0].points[i - 1].fraction);
  EXPECT_EQ(cdfs[1].count, 0u);
  EXPECT_TRUE(cdfs[1].points.empty());
  std::stringstream ss;
  write_cdf_table(ss, "tcp_count", cdfs);
  EXPECT_TRUE(ss.str().starts_with("#schema\tlocflow.cdf/1\ttcp_count\n"));
  EXPECT_NE(ss.str().find("#empty\ty"), std::string::npos);
}

TEST(Cdf, UnknownSelectorListsFields) {
  std::vector<features::StatVector> rows{with_tcp(1)};
  std::vector<std::string> labels{"x"};
  try {
    cdf_export(rows, labels, labels, "packets");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("interval_mean"), std::string::npos);
  }
}

TEST(Report, WeightedAndMacroAverages) {
  ConfusionMatrix cm({"a", "b"});
  cm.add(0, 0, 8);
  cm.add(0, 1, 2);
  cm.add(1, 1, 30);
  auto e = summarize("t", "d", cm);
  ASSERT_EQ(e.per_class.size(), 2u);
  const double fa = metrics(cm, 0).f_measure, fb = metrics(cm, 1).f_measure;
  EXPECT_NEAR(e.weighted.f_measure, (10 * fa + 30 * fb) / 40, 1e-15);
  EXPECT_NEAR(e.macro.f_measure, (fa + fb) / 2, 1e-15);
  EXPECT_NEAR(e.accuracy, 38.0 / 40.0, 1e-15);

  EvalReport r;
  r.seed = 5;
  r.folds = 10;
  r.evaluations.push_back(e);
  r.ranking.push_back({"stat:tcp_count", 0.5, 10.5});
  const auto text = render_text(r), json = render_json(r);
  EXPECT_NE(text.find("stat:tcp_count"), std::string::npos);
  EXPECT_NE(json.find("locflow.report/1"), std::string::npos);
  EXPECT_EQ(render_json(r), json);
}
