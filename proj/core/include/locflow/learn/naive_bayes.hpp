#pragma once

#include <span>
#include <string>
#include <vector>

#include "locflow/learn/dataset.hpp"

namespace locflow::learn {

/// Bernoulli naive Bayes. A feature is "present" when its value is nonzero.
struct NaiveBayesModel {
  Vocabulary vocabulary;
  std::vector<std::string> label_space;
  double smoothing = 1.0;
  std::vector<double> log_prior;    // per class
  std::vector<double> log_present;  // class-major, classes x features
  std::vector<double> log_absent;

  Prediction predict(std::span<const double> row) const;
  Prediction predict(const SparseFeatureVector& features) const;
};

/// Closed-form counts with Laplace smoothing:
/// P(f | c) = (count(f, c) + alpha) / (n_c + 2 alpha), P(c) = n_c / n.
/// Throws TrainingError on an empty dataset, a class without rows, or
/// alpha <= 0.
NaiveBayesModel train_naive_bayes(const LabeledDataset& data, double smoothing = 1.0);

}  // namespace locflow::learn
