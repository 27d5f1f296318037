#pragma once

#include <span>
#include <string>
#include <vector>

#include "locflow/learn/dataset.hpp"

namespace locflow::learn {

struct LogisticConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2 = 1e-4;
};

/// One-vs-rest logistic regression; one weight row and bias per class.
struct LogisticModel {
  Vocabulary vocabulary;
  std::vector<std::string> label_space;
  LogisticConfig config;
  std::vector<double> weights;  // class-major, classes x features
  std::vector<double> bias;

  /// Scores are per-class sigmoid outputs (not normalized across classes).
  Prediction predict(std::span<const double> row) const;
  Prediction predict(const SparseFeatureVector& features) const;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  double bias_gradient = 0.0;
};

/// Mean binary log loss of one head plus (l2 / 2) * ||w||^2 (bias not
/// penalized), with its analytic gradient. `targets[i]` is 1 for the positive
/// class and 0 otherwise.
LossAndGradient binary_logistic_loss(const LabeledDataset& data, std::span<const int> targets,
                                     std::span<const double> weights, double bias, double l2);

/// Full-batch gradient descent per head. Throws TrainingError when fewer than
/// two classes are present or the loss stops being finite.
LogisticModel train_logistic(const LabeledDataset& data, const LogisticConfig& config = {});

}  // namespace locflow::learn
