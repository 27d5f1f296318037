#include "locflow/eval/metrics.hpp"

namespace locflow::eval {

namespace {

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  degenerate = den == 0;
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

BinaryCounts one_vs_rest(const ConfusionMatrix& cm, std::size_t positive) {
  BinaryCounts b;
  for (std::size_t a = 0; a < cm.size(); ++a) {
    for (std::size_t p = 0; p < cm.size(); ++p) {
      const auto n = cm.count(a, p);
      if (a == positive && p == positive) b.tp += n;
      else if (a == positive) b.fn += n;
      else if (p == positive) b.fp += n;
      else b.tn += n;
    }
  }
  return b;
}

Metrics metrics(const BinaryCounts& c) {
  Metrics m;
  m.tp_rate = ratio(c.tp, c.tp + c.fn, m.tp_rate_degenerate);
  m.fp_rate = ratio(c.fp, c.fp + c.tn, m.fp_rate_degenerate);
  m.precision = ratio(c.tp, c.tp + c.fp, m.precision_degenerate);
  m.f_measure = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, m.f_measure_degenerate);
  return m;
}

Metrics metrics(const ConfusionMatrix& cm, std::size_t positive) { return metrics(one_vs_rest(cm, positive)); }

double accuracy(const BinaryCounts& c) {
  const auto total = c.tp + c.fn + c.fp + c.tn;
  return total == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

double accuracy(const ConfusionMatrix& cm) {
  std::size_t trace = 0;
  for (std::size_t i = 0; i < cm.size(); ++i) trace += cm.count(i, i);
  const auto total = cm.total();
  return total == 0 ? 0.0 : static_cast<double>(trace) / static_cast<double>(total);
}

}  // namespace locflow::eval
