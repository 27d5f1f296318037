#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "locflow/common/sparse_vector.hpp"

namespace locflow::learn {

/// Ordered feature names fixing dense column indices.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  /// Sorted union of the names present in `rows`.
  static Vocabulary from_rows(std::span<const SparseFeatureVector> rows);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  /// Column of `name`, or size() when unknown.
  std::size_t index_of(std::string_view name) const;

  /// Dense row; names outside the vocabulary are ignored.
  std::vector<double> densify(const SparseFeatureVector& features) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Dense labelled rows. Binary features are stored as 0/1 like any numeric one.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(Vocabulary vocabulary, std::vector<std::string> label_space);

  /// Builds a dataset from sparse rows. The vocabulary is the sorted union of
  /// feature names unless given; the label space is the sorted set of labels
  /// unless given. Throws DataError for a label outside the given space.
  static LabeledDataset from_sparse(std::span<const SparseFeatureVector> rows, std::span<const std::string> labels,
                                    std::vector<std::string> label_space = {}, const Vocabulary* vocabulary = nullptr);

  void add_row(std::span<const double> values, std::size_t label);

  std::size_t rows() const { return labels_.size(); }
  std::size_t features() const { return vocabulary_.size(); }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * features(), features()}; }
  double value(std::size_t row, std::size_t feature) const { return values_[row * features() + feature]; }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::size_t>& labels() const { return labels_; }

  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<std::string>& label_space() const { return label_space_; }
  std::size_t classes() const { return label_space_.size(); }
  std::size_t label_index(std::string_view label) const;  // classes() when unknown

  std::vector<std::size_t> class_counts() const;
  /// Rows at the given indices, same vocabulary and label space.
  LabeledDataset subset(std::span<const std::size_t> indices) const;

 private:
  Vocabulary vocabulary_;
  std::vector<std::string> label_space_;
  std::vector<double> values_;
  std::vector<std::size_t> labels_;
};

/// Result of a single-row prediction: the chosen label index and one score
/// per class (normalized to sum to 1 where the model has a probabilistic
/// reading). Ties pick the earliest label in label-space order.
struct Prediction {
  std::size_t label = 0;
  std::vector<double> scores;
};

/// Index of the largest score; ties go to the lowest index.
std::size_t argmax(std::span<const double> scores);

}  // namespace locflow::learn
