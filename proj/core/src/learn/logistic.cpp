#include "locflow/learn/logistic.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "locflow/common/errors.hpp"

namespace locflow::learn {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Nonzero entries per row; bag-of-words rows are mostly zero.
struct SparseRows {
  std::vector<std::size_t> offsets{0};
  std::vector<std::pair<std::size_t, double>> entries;

  explicit SparseRows(const LabeledDataset& data) {
    for (std::size_t i = 0; i < data.rows(); ++i) {
      const auto row = data.row(i);
      for (std::size_t f = 0; f < row.size(); ++f) {
        if (row[f] != 0.0) entries.emplace_back(f, row[f]);
      }
      offsets.push_back(entries.size());
    }
  }
};

LossAndGradient loss_and_gradient(const SparseRows& rows, std::size_t n, std::size_t d, std::span<const int> targets,
                                  std::span<const double> weights, double bias, double l2) {
  LossAndGradient out;
  out.weight_gradient.assign(d, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = bias;
    for (std::size_t e = rows.offsets[i]; e < rows.offsets[i + 1]; ++e) z += weights[rows.entries[e].first] * rows.entries[e].second;
    const double y = targets[i];
    loss += softplus(z) - y * z;
    const double residual = sigmoid(z) - y;
    out.bias_gradient += residual;
    for (std::size_t e = rows.offsets[i]; e < rows.offsets[i + 1]; ++e)
      out.weight_gradient[rows.entries[e].first] += residual * rows.entries[e].second;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double penalty = 0.0;
  for (std::size_t f = 0; f < d; ++f) {
    out.weight_gradient[f] = out.weight_gradient[f] * inv_n + l2 * weights[f];
    penalty += weights[f] * weights[f];
  }
  out.bias_gradient *= inv_n;
  out.loss = loss * inv_n + 0.5 * l2 * penalty;
  return out;
}

}  // namespace

LossAndGradient binary_logistic_loss(const LabeledDataset& data, std::span<const int> targets,
                                     std::span<const double> weights, double bias, double l2) {
  if (targets.size() != data.rows() || weights.size() != data.features())
    throw DataError("binary_logistic_loss: dimension mismatch");
  return loss_and_gradient(SparseRows(data), data.rows(), data.features(), targets, weights, bias, l2);
}

LogisticModel train_logistic(const LabeledDataset& data, const LogisticConfig& config) {
  if (data.empty()) throw TrainingError("logistic regression: empty dataset");
  std::size_t present = 0;
  for (auto c : data.class_counts()) present += c > 0;
  if (data.classes() < 2 || present < 2) throw TrainingError("logistic regression: needs at least two classes");

  const std::size_t k = data.classes();
  const std::size_t d = data.features();
  const std::size_t n = data.rows();
  const SparseRows rows(data);

  LogisticModel model;
  model.vocabulary = data.vocabulary();
  model.label_space = data.label_space();
  model.config = config;
  model.weights.assign(k * d, 0.0);
  model.bias.assign(k, 0.0);

  std::vector<int> targets(n);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < n; ++i) targets[i] = data.label(i) == c ? 1 : 0;
    std::span<double> w(model.weights.data() + c * d, d);
    double& b = model.bias[c];
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      const auto g = loss_and_gradient(rows, n, d, targets, w, b, config.l2);
      if (!std::isfinite(g.loss)) {
        throw TrainingError("logistic regression: non-finite loss at epoch " + std::to_string(epoch) + " for class '" +
                            data.label_space()[c] + "' (learning_rate " + std::to_string(config.learning_rate) + ")");
      }
      for (std::size_t f = 0; f < d; ++f) w[f] -= config.learning_rate * g.weight_gradient[f];
      b -= config.learning_rate * g.bias_gradient;
    }
  }
  return model;
}

Prediction LogisticModel::predict(std::span<const double> row) const {
  const std::size_t k = label_space.size();
  const std::size_t d = vocabulary.size();
  Prediction p;
  p.scores.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    double z = bias[c];
    const double* w = weights.data() + c * d;
    for (std::size_t f = 0; f < d; ++f) {
      if (row[f] != 0.0) z += w[f] * row[f];
    }
    p.scores[c] = sigmoid(z);
  }
  p.label = argmax(p.scores);
  return p;
}

Prediction LogisticModel::predict(const SparseFeatureVector& features) const {
  return predict(vocabulary.densify(features));
}

}  // namespace locflow::learn
