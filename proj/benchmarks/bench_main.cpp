#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "locflow/features/flow_vector.hpp"
#include "locflow/features/stat_features.hpp"
#include "locflow/learn/ocsvm.hpp"
#include "locflow/learn/random_forest.hpp"

using namespace locflow;

namespace {

std::vector<capture::HttpFlow> flows(std::size_t n) {
  Rng rng(11);
  std::vector<capture::HttpFlow> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto f = fixture::random_flow(rng);
    f.requests.push_back(fixture::request("api.weather.example.com", "/v1/geo?lat=38.5&lon=-121.7&units=m"));
    out.push_back(std::move(f));
  }
  return out;
}

learn::LabeledDataset blobs(std::size_t rows, std::size_t dims, std::size_t classes) {
  Rng rng(5);
  std::vector<std::string> names, labels;
  for (std::size_t f = 0; f < dims; ++f) names.push_back("f" + std::to_string(f));
  for (std::size_t c = 0; c < classes; ++c) labels.push_back("c" + std::to_string(c));
  learn::LabeledDataset d(learn::Vocabulary(names), labels);
  std::vector<double> row(dims);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto c = i % classes;
    for (std::size_t f = 0; f < dims; ++f) row[f] = standard_normal(rng) + (f % classes == c ? 1.5 : 0.0);
    d.add_row(row, c);
  }
  return d;
}

}  // namespace

static void BM_StatFeatures(benchmark::State& state) {
  const auto fs = flows(1000);
  for (auto _ : state)
    for (const auto& f : fs) benchmark::DoNotOptimize(features::stat_features(f));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fs.size()));
}
BENCHMARK(BM_StatFeatures);

static void BM_FlowVectorBoth(benchmark::State& state) {
  const auto fs = flows(1000);
  for (auto _ : state)
    for (const auto& f : fs) benchmark::DoNotOptimize(features::flow_feature_vector(f, features::FeatureSet::both));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(fs.size()));
}
BENCHMARK(BM_FlowVectorBoth);

static void BM_ForestTrain(benchmark::State& state) {
  const auto d = blobs(static_cast<std::size_t>(state.range(0)), 40, 3);
  learn::ForestConfig cfg;
  cfg.n_trees = 50;
  for (auto _ : state) benchmark::DoNotOptimize(learn::train_random_forest(d, cfg));
}
BENCHMARK(BM_ForestTrain)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_OcsvmTrain(benchmark::State& state) {
  const auto d = blobs(static_cast<std::size_t>(state.range(0)), 40, 1);
  for (auto _ : state) benchmark::DoNotOptimize(learn::train_ocsvm(d));
}
BENCHMARK(BM_OcsvmTrain)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
