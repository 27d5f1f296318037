#include "locflow/learn/naive_bayes.hpp"

#include <cmath>

#include "locflow/common/errors.hpp"

namespace locflow::learn {

NaiveBayesModel train_naive_bayes(const LabeledDataset& data, double smoothing) {
  if (data.empty()) throw TrainingError("naive Bayes: empty dataset");
  if (!(smoothing > 0.0)) throw TrainingError("naive Bayes: smoothing must be positive");
  const std::size_t k = data.classes();
  const std::size_t d = data.features();
  const auto class_rows = data.class_counts();
  for (std::size_t c = 0; c < k; ++c) {
    if (class_rows[c] == 0) throw TrainingError("naive Bayes: class '" + data.label_space()[c] + "' has no rows");
  }

  std::vector<double> present(k * d, 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row(i);
    double* counts = present.data() + data.label(i) * d;
    for (std::size_t f = 0; f < d; ++f) {
      if (row[f] != 0.0) counts[f] += 1.0;
    }
  }

  NaiveBayesModel model;
  model.vocabulary = data.vocabulary();
  model.label_space = data.label_space();
  model.smoothing = smoothing;
  model.log_prior.resize(k);
  model.log_present.resize(k * d);
  model.log_absent.resize(k * d);
  const double n = static_cast<double>(data.rows());
  for (std::size_t c = 0; c < k; ++c) {
    const double nc = static_cast<double>(class_rows[c]);
    model.log_prior[c] = std::log(nc / n);
    const double denom = nc + 2.0 * smoothing;
    for (std::size_t f = 0; f < d; ++f) {
      const double count = present[c * d + f];
      model.log_present[c * d + f] = std::log((count + smoothing) / denom);
      model.log_absent[c * d + f] = std::log((nc - count + smoothing) / denom);
    }
  }
  return model;
}

Prediction NaiveBayesModel::predict(std::span<const double> row) const {
  const std::size_t k = label_space.size();
  const std::size_t d = vocabulary.size();
  std::vector<double> joint(k);
  for (std::size_t c = 0; c < k; ++c) {
    double s = log_prior[c];
    const double* lp = log_present.data() + c * d;
    const double* la = log_absent.data() + c * d;
    for (std::size_t f = 0; f < d; ++f) s += row[f] != 0.0 ? lp[f] : la[f];
    joint[c] = s;
  }
  Prediction p;
  p.label = argmax(joint);
  const double top = joint[p.label];
  double total = 0.0;
  p.scores.resize(k);
  for (std::size_t c = 0; c < k; ++c) total += p.scores[c] = std::exp(joint[c] - top);
  for (auto& s : p.scores) s /= total;
  return p;
}

Prediction NaiveBayesModel::predict(const SparseFeatureVector& features) const {
  return predict(vocabulary.densify(features));
}

}  // namespace locflow::learn
