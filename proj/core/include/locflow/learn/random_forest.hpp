#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "locflow/learn/dataset.hpp"

namespace locflow::learn {

enum class BootstrapMode {
  sample,    // n draws with replacement from the tree's RNG
  none,      // every row once (test hook)
  row_hash,  // Poisson(1) multiplicity from a hash of seed, tree and row values (test hook)
};

struct ForestConfig {
  int n_trees = 100;
  int max_depth = 0;      // 0 = unlimited
  int min_leaf = 1;       // minimum bootstrap weight per child
  std::uint64_t seed = 20170605;
  int max_features = 0;   // 0 = ceil(sqrt(features))
  BootstrapMode bootstrap = BootstrapMode::sample;
  int jobs = 1;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when value <= threshold
  int left = -1;
  int right = -1;
  std::vector<double> histogram;  // leaves only: bootstrap weight per class
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::uint64_t seed = 0;

  const std::vector<double>& leaf_histogram(std::span<const double> row) const;
};

struct RandomForestModel {
  Vocabulary vocabulary;
  std::vector<std::string> label_space;
  ForestConfig config;
  std::vector<DecisionTree> trees;
  double oob_accuracy = -1.0;  // -1 when no row was ever out of bag

  /// Argmax of the summed leaf histograms; scores are the normalized sums.
  Prediction predict(std::span<const double> row) const;
  Prediction predict(const SparseFeatureVector& features) const;
};

/// CART trees with Gini impurity on bootstrap samples. Each node draws
/// max_features candidate features without replacement; when none of them
/// can split the node, further features are drawn until one can or all are
/// exhausted. Split ties resolve to the lower feature index, then the lower
/// threshold. Deterministic given (data, config).
RandomForestModel train_random_forest(const LabeledDataset& data, const ForestConfig& config = {});

/// Grows one tree on the given per-row weights with an RNG seeded from
/// `seed`. Exposed for tests.
DecisionTree grow_tree(const LabeledDataset& data, std::span<const double> weights, const ForestConfig& config,
                       std::uint64_t seed);

}  // namespace locflow::learn
