#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "locflow/eval/confusion.hpp"
#include "locflow/eval/metrics.hpp"
#include "locflow/learn/info_gain.hpp"

namespace locflow::eval {

struct ClassMetrics {
  std::string label;
  std::size_t support = 0;  // actual rows of this class
  Metrics metrics;
};

struct Evaluation {
  std::string name;
  std::string description;
  ConfusionMatrix confusion;
  std::vector<ClassMetrics> per_class;
  Metrics weighted;  // support-weighted mean of one-vs-rest metrics
  Metrics macro;
  double accuracy = 0.0;
};

/// Per-class one-vs-rest metrics with weighted and macro averages.
Evaluation summarize(std::string name, std::string description, const ConfusionMatrix& cm);

struct EvalReport {
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  std::vector<Evaluation> evaluations;
  std::vector<learn::FeatureGain> ranking;  // top features by information gain
  std::vector<std::pair<std::string, std::string>> notes;
};

std::string render_text(const EvalReport& report);
std::string render_json(const EvalReport& report);

}  // namespace locflow::eval
