#include "locflow/learn/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "locflow/common/digest.hpp"
#include "locflow/common/errors.hpp"
#include "locflow/common/random.hpp"

namespace locflow::learn {

namespace {

constexpr double kTieEpsilon = 1e-12;

double gini(std::span<const double> hist, double total) {
  if (total <= 0.0) return 0.0;
  double sq = 0.0;
  for (double h : hist) sq += (h / total) * (h / total);
  return 1.0 - sq;
}

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;

  bool improves_on(const Split& best) const {
    if (!best.found) return true;
    if (impurity < best.impurity - kTieEpsilon) return true;
    if (impurity > best.impurity + kTieEpsilon) return false;
    return feature < best.feature || (feature == best.feature && threshold < best.threshold);
  }
};

class TreeBuilder {
 public:
  TreeBuilder(const LabeledDataset& data, std::span<const double> weights, const ForestConfig& config,
              std::uint64_t seed)
      : data_(data), weights_(weights), config_(config), rng_(seed), classes_(data.classes()) {
    const std::size_t d = data.features();
    candidates_ = config.max_features > 0 ? static_cast<std::size_t>(config.max_features)
                                          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
    candidates_ = std::clamp<std::size_t>(candidates_, 1, std::max<std::size_t>(d, 1));
    order_.resize(d);
  }

  DecisionTree build(std::uint64_t seed) {
    DecisionTree tree;
    tree.seed = seed;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data_.rows(); ++i) {
      if (weights_[i] > 0.0) rows.push_back(i);
    }
    struct Task {
      std::vector<std::size_t> rows;
      int depth;
      int node;
    };
    tree.nodes.emplace_back();
    std::vector<Task> stack;
    stack.push_back({std::move(rows), 0, 0});
    while (!stack.empty()) {
      Task task = std::move(stack.back());
      stack.pop_back();

      std::vector<double> hist(classes_, 0.0);
      double total = 0.0;
      for (auto r : task.rows) {
        hist[data_.label(r)] += weights_[r];
        total += weights_[r];
      }
      const auto populated = std::count_if(hist.begin(), hist.end(), [](double h) { return h > 0.0; });
      const bool depth_limited = config_.max_depth > 0 && task.depth >= config_.max_depth;
      Split split;
      if (populated > 1 && !depth_limited && total >= 2.0 * config_.min_leaf) split = find_split(task.rows, total);
      if (!split.found) {
        tree.nodes[task.node].histogram = std::move(hist);
        continue;
      }

      std::vector<std::size_t> left, right;
      for (auto r : task.rows) (data_.value(r, split.feature) <= split.threshold ? left : right).push_back(r);
      const int left_index = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& node = tree.nodes[task.node];
      node.feature = static_cast<int>(split.feature);
      node.threshold = split.threshold;
      node.left = left_index;
      node.right = left_index + 1;
      stack.push_back({std::move(right), task.depth + 1, left_index + 1});
      stack.push_back({std::move(left), task.depth + 1, left_index});
    }
    return tree;
  }

 private:
  Split find_split(const std::vector<std::size_t>& rows, double total) {
    const std::size_t d = order_.size();
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    Split best;
    for (std::size_t t = 0; t < d; ++t) {
      std::swap(order_[t], order_[t + uniform_below(rng_, d - t)]);
      const Split s = best_split_on(order_[t], rows, total);
      if (s.found && s.improves_on(best)) best = s;
      if (t + 1 >= candidates_ && best.found) break;
    }
    return best;
  }

  Split best_split_on(std::size_t feature, const std::vector<std::size_t>& rows, double total) {
    scratch_.clear();
    for (auto r : rows) scratch_.emplace_back(data_.value(r, feature), r);
    std::sort(scratch_.begin(), scratch_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
    Split best;
    if (scratch_.front().first == scratch_.back().first) return best;

    std::vector<double> left(classes_, 0.0), right(classes_, 0.0);
    for (auto r : rows) right[data_.label(r)] += weights_[r];
    double left_weight = 0.0;
    const double min_leaf = static_cast<double>(config_.min_leaf);
    for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
      const auto [value, r] = scratch_[i];
      const double w = weights_[r];
      left[data_.label(r)] += w;
      right[data_.label(r)] -= w;
      left_weight += w;
      const double next = scratch_[i + 1].first;
      if (value == next) continue;
      const double right_weight = total - left_weight;
      if (left_weight < min_leaf || right_weight < min_leaf) continue;
      Split s;
      s.found = true;
      s.feature = feature;
      s.threshold = value + (next - value) / 2.0;
      if (!(s.threshold < next)) s.threshold = value;
      s.impurity = (left_weight * gini(left, left_weight) + right_weight * gini(right, right_weight)) / total;
      if (s.improves_on(best)) best = s;
    }
    return best;
  }

  const LabeledDataset& data_;
  std::span<const double> weights_;
  const ForestConfig& config_;
  Rng rng_;
  std::size_t classes_;
  std::size_t candidates_ = 1;
  std::vector<std::size_t> order_;
  std::vector<std::pair<double, std::size_t>> scratch_;
};

double poisson_one(double u) {
  double p = std::exp(-1.0);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < 64) {
    ++k;
    p /= k;
    cdf += p;
  }
  return static_cast<double>(k);
}

std::vector<double> bootstrap_weights(const LabeledDataset& data, const ForestConfig& config, std::uint64_t tree_seed) {
  const std::size_t n = data.rows();
  std::vector<double> weights(n, 0.0);
  switch (config.bootstrap) {
    case BootstrapMode::none:
      std::fill(weights.begin(), weights.end(), 1.0);
      break;
    case BootstrapMode::sample: {
      Rng rng(mix_seed(tree_seed ^ 0xb0075742ULL));
      for (std::size_t i = 0; i < n; ++i) weights[uniform_below(rng, n)] += 1.0;
      break;
    }
    case BootstrapMode::row_hash:
      for (std::size_t i = 0; i < n; ++i) {
        Fnv1a h;
        h.update(&tree_seed, sizeof tree_seed);
        const auto row = data.row(i);
        h.update(row.data(), row.size_bytes());
        const auto label = data.label(i);
        h.update(&label, sizeof label);
        const double u = static_cast<double>(mix_seed(h.value()) >> 11) * 0x1.0p-53;
        weights[i] = poisson_one(u);
      }
      break;
  }
  return weights;
}

}  // namespace

DecisionTree grow_tree(const LabeledDataset& data, std::span<const double> weights, const ForestConfig& config,
                       std::uint64_t seed) {
  TreeBuilder builder(data, weights, config, seed);
  return builder.build(seed);
}

const std::vector<double>& DecisionTree::leaf_histogram(std::span<const double> row) const {
  const TreeNode* node = &nodes.front();
  while (node->feature >= 0) node = &nodes[row[node->feature] <= node->threshold ? node->left : node->right];
  return node->histogram;
}

RandomForestModel train_random_forest(const LabeledDataset& data, const ForestConfig& config) {
  if (data.empty()) throw TrainingError("random forest: empty dataset");
  if (config.n_trees < 1) throw TrainingError("random forest: n_trees must be at least 1");
  if (config.min_leaf < 1) throw TrainingError("random forest: min_leaf must be at least 1");

  RandomForestModel model;
  model.vocabulary = data.vocabulary();
  model.label_space = data.label_space();
  model.config = config;
  const auto n_trees = static_cast<std::size_t>(config.n_trees);
  model.trees.resize(n_trees);
  std::vector<std::vector<double>> weights(n_trees);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t t = first; t < n_trees; t += stride) {
      const std::uint64_t seed = derive_seed(config.seed, t);
      weights[t] = bootstrap_weights(data, config, seed);
      bool any = std::any_of(weights[t].begin(), weights[t].end(), [](double w) { return w > 0.0; });
      if (!any) weights[t].assign(data.rows(), 1.0);
      model.trees[t] = grow_tree(data, weights[t], config, seed);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.jobs, 1)), 1, n_trees);
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(work, j, jobs);
    for (auto& th : threads) th.join();
  }

  if (config.bootstrap != BootstrapMode::none) {
    std::size_t evaluated = 0, correct = 0;
    std::vector<double> votes(data.classes());
    for (std::size_t i = 0; i < data.rows(); ++i) {
      std::fill(votes.begin(), votes.end(), 0.0);
      bool seen = false;
      for (std::size_t t = 0; t < n_trees; ++t) {
        if (weights[t][i] > 0.0) continue;
        const auto& h = model.trees[t].leaf_histogram(data.row(i));
        for (std::size_t c = 0; c < votes.size(); ++c) votes[c] += h[c];
        seen = true;
      }
      if (!seen) continue;
      ++evaluated;
      correct += argmax(votes) == data.label(i);
    }
    if (evaluated) model.oob_accuracy = static_cast<double>(correct) / static_cast<double>(evaluated);
  }
  return model;
}

Prediction RandomForestModel::predict(std::span<const double> row) const {
  Prediction p;
  p.scores.assign(label_space.size(), 0.0);
  for (const auto& tree : trees) {
    const auto& h = tree.leaf_histogram(row);
    for (std::size_t c = 0; c < p.scores.size(); ++c) p.scores[c] += h[c];
  }
  p.label = argmax(p.scores);
  double total = 0.0;
  for (double s : p.scores) total += s;
  if (total > 0.0) {
    for (auto& s : p.scores) s /= total;
  }
  return p;
}

Prediction RandomForestModel::predict(const SparseFeatureVector& features) const {
  return predict(vocabulary.densify(features));
}

}  // namespace locflow::learn
