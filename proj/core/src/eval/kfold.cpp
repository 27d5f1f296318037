#include "locflow/eval/kfold.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "locflow/common/errors.hpp"
#include "locflow/common/random.hpp"

namespace locflow::eval {

std::vector<std::size_t> stratified_folds(const learn::LabeledDataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DataError("k-fold needs k >= 2");
  std::vector<std::vector<std::size_t>> by_class(data.classes());
  for (std::size_t i = 0; i < data.rows(); ++i) by_class[data.label(i)].push_back(i);

  std::vector<std::size_t> fold(data.rows(), 0);
  std::size_t next = 0;  // continue dealing across classes so fold sizes stay even
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    if (rows.empty()) continue;
    if (rows.size() < k)
      throw DataError("class " + data.label_space()[c] + " has " + std::to_string(rows.size()) + " rows, fewer than k = " +
                      std::to_string(k));
    Rng rng(derive_seed(seed, c));
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[uniform_below(rng, i)]);
    for (auto r : rows) fold[r] = next++ % k;
  }
  return fold;
}

KFoldResult kfold(const learn::LabeledDataset& data, const Trainer& trainer, const KFoldOptions& options) {
  if (!options.truth.empty() && options.truth.size() != data.rows())
    throw DataError("k-fold: truth labels do not cover the dataset");
  KFoldResult result;
  result.fold = stratified_folds(data, options.k, options.seed);
  result.prediction.assign(data.rows(), 0);

  auto run_fold = [&](std::size_t f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < data.rows(); ++i) (result.fold[i] == f ? test : train).push_back(i);
    const auto predictor = trainer(data.subset(train));
    for (auto i : test) result.prediction[i] = predictor(data.row(i));
  };

  const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(options.jobs, static_cast<int>(options.k))));
  if (workers == 1) {
    for (std::size_t f = 0; f < options.k; ++f) run_fold(f);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t f = w; f < options.k; f += workers) run_fold(f);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  result.confusion = ConfusionMatrix(data.label_space());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    result.confusion.add(options.truth.empty() ? data.label(i) : options.truth[i], result.prediction[i]);
  }
  return result;
}

}  // namespace locflow::eval
