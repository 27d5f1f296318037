#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "locflow/eval/confusion.hpp"
#include "locflow/learn/dataset.hpp"

namespace locflow::eval {

/// Predicts a label index for one dense row.
using Predictor = std::function<std::size_t(std::span<const double>)>;
/// Fits on a training fold and returns its predictor.
using Trainer = std::function<Predictor(const learn::LabeledDataset&)>;

/// Stratified fold index per row: each class is shuffled with a seeded RNG
/// and dealt round-robin. Throws DataError when k < 2 or a class with rows
/// has fewer than k of them.
std::vector<std::size_t> stratified_folds(const learn::LabeledDataset& data, std::size_t k, std::uint64_t seed);

struct KFoldOptions {
  std::size_t k = 10;
  std::uint64_t seed = 20170605;
  int jobs = 1;
  /// Actual labels used for scoring instead of the training labels (same
  /// label space, one per row). Training always sees the dataset's labels.
  std::span<const std::size_t> truth = {};
};

struct KFoldResult {
  ConfusionMatrix confusion;
  std::vector<std::size_t> fold;        // per row
  std::vector<std::size_t> prediction;  // per row
};

/// Every row is predicted exactly once by a model trained on the other folds.
KFoldResult kfold(const learn::LabeledDataset& data, const Trainer& trainer, const KFoldOptions& options = {});

}  // namespace locflow::eval
