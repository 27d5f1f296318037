#pragma once

#include <cstddef>

#include "locflow/eval/confusion.hpp"

namespace locflow::eval {

struct BinaryCounts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
};

/// One-vs-rest reduction for `positive`.
BinaryCounts one_vs_rest(const ConfusionMatrix& cm, std::size_t positive);

struct Metrics {
  double tp_rate = 0.0;
  double fp_rate = 0.0;
  double precision = 0.0;
  double f_measure = 0.0;
  // Set when the metric's denominator was zero and it was reported as 0.
  bool tp_rate_degenerate = false;
  bool fp_rate_degenerate = false;
  bool precision_degenerate = false;
  bool f_measure_degenerate = false;

  bool degenerate() const {
    return tp_rate_degenerate || fp_rate_degenerate || precision_degenerate || f_measure_degenerate;
  }
};

/// TPR = TP/(TP+FN), FPR = FP/(FP+TN), precision = TP/(TP+FP),
/// F = 2TP/(2TP+FP+FN).
Metrics metrics(const BinaryCounts& counts);
Metrics metrics(const ConfusionMatrix& cm, std::size_t positive);

double accuracy(const BinaryCounts& counts);
/// Trace over total; 0 for an empty matrix.
double accuracy(const ConfusionMatrix& cm);

}  // namespace locflow::eval
