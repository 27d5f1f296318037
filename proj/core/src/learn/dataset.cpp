#include "locflow/learn/dataset.hpp"

#include <algorithm>
#include <set>

#include "locflow/common/errors.hpp"

namespace locflow::learn {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) throw DataError("duplicate vocabulary entry '" + names_[i] + "'");
  }
}

Vocabulary Vocabulary::from_rows(std::span<const SparseFeatureVector> rows) {
  std::set<std::string> names;
  for (const auto& row : rows) {
    for (const auto& [name, value] : row) names.insert(name);
  }
  return Vocabulary(std::vector<std::string>(names.begin(), names.end()));
}

std::size_t Vocabulary::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? names_.size() : it->second;
}

std::vector<double> Vocabulary::densify(const SparseFeatureVector& features) const {
  std::vector<double> dense(names_.size(), 0.0);
  for (const auto& [name, value] : features) {
    if (auto i = index_of(name); i < names_.size()) dense[i] = value;
  }
  return dense;
}

LabeledDataset::LabeledDataset(Vocabulary vocabulary, std::vector<std::string> label_space)
    : vocabulary_(std::move(vocabulary)), label_space_(std::move(label_space)) {}

LabeledDataset LabeledDataset::from_sparse(std::span<const SparseFeatureVector> rows,
                                           std::span<const std::string> labels, std::vector<std::string> label_space,
                                           const Vocabulary* vocabulary) {
  if (rows.size() != labels.size()) throw DataError("row and label counts differ");
  if (label_space.empty()) {
    std::set<std::string> distinct(labels.begin(), labels.end());
    label_space.assign(distinct.begin(), distinct.end());
  }
  LabeledDataset data(vocabulary ? *vocabulary : Vocabulary::from_rows(rows), std::move(label_space));
  data.values_.reserve(rows.size() * data.features());
  data.labels_.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto label = data.label_index(labels[i]);
    if (label == data.classes()) throw DataError("label '" + labels[i] + "' is outside the label space");
    const auto dense = data.vocabulary_.densify(rows[i]);
    data.add_row(dense, label);
  }
  return data;
}

void LabeledDataset::add_row(std::span<const double> values, std::size_t label) {
  if (values.size() != features()) throw DataError("row width does not match vocabulary");
  if (label >= classes()) throw DataError("label index out of range");
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
}

std::size_t LabeledDataset::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < label_space_.size(); ++i) {
    if (label_space_[i] == label) return i;
  }
  return label_space_.size();
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(classes(), 0);
  for (auto l : labels_) ++counts[l];
  return counts;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out(vocabulary_, label_space_);
  out.values_.reserve(indices.size() * features());
  out.labels_.reserve(indices.size());
  for (auto i : indices) out.add_row(row(i), labels_[i]);
  return out;
}

std::size_t argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

}  // namespace locflow::learn
