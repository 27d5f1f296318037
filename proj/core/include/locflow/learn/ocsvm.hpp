#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "locflow/common/errors.hpp"
#include "locflow/learn/dataset.hpp"

namespace locflow::learn {

/// Per-feature min-max scaling to [0, 1] with training bounds. Features that
/// were constant in training are only shifted, so deviations still count.
struct MinMaxScaler {
  std::vector<double> lower;
  std::vector<double> upper;

  static MinMaxScaler fit(const LabeledDataset& data);
  std::vector<double> transform(std::span<const double> row) const;
};

struct OcsvmConfig {
  double nu = 0.1;
  double gamma = 0.0;         // 0 = 1 / features
  double tolerance = 1e-10;   // maximal-violating-pair stopping threshold
  std::size_t max_iterations = 0;  // 0 = max(10^7, 100 n)
};

/// Solution of the nu-one-class dual
///   min 1/2 a^T K a  s.t. 0 <= a_i <= 1/(nu n), sum a_i = 1.
struct OneClassDualSolution {
  std::vector<double> alpha;
  std::vector<double> gradient;  // K a
  double rho = 0.0;
  double upper_bound = 0.0;      // 1/(nu n)
  double duality_gap = 0.0;
  double max_violation = 0.0;
  std::size_t iterations = 0;
};

class OcsvmConvergenceError : public TrainingError {
 public:
  OcsvmConvergenceError(const std::string& what, double best_gap) : TrainingError(what), best_gap_(best_gap) {}
  double best_duality_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

/// SMO with second-order working-set selection over a dense kernel matrix
/// (row-major n x n). Throws OcsvmConvergenceError after max_iterations.
OneClassDualSolution solve_one_class_dual(std::span<const double> kernel, std::size_t n, double nu, double tolerance,
                                          std::size_t max_iterations);

/// Primal-dual gap for a feasible alpha given its gradient K a.
double one_class_duality_gap(std::span<const double> alpha, std::span<const double> gradient, double upper_bound);

/// One-class SVM with RBF kernel exp(-gamma ||x - y||^2). Because K(x, x) = 1,
/// this boundary coincides with Support Vector Data Description.
struct OcsvmModel {
  Vocabulary vocabulary;
  MinMaxScaler scaler;
  double nu = 0.1;
  double gamma = 1.0;
  double rho = 0.0;
  std::vector<double> coefficients;                  // alpha of support vectors
  std::vector<std::vector<double>> support_vectors;  // scaled
  double duality_gap = 0.0;
  std::size_t iterations = 0;

  /// Points on the boundary evaluate to zero only up to the solver's
  /// stopping threshold (default 1e-10), so the cut sits a little below it.
  static constexpr double kBoundaryTolerance = 1e-9;

  /// sum_i alpha_i K(sv_i, x) - rho on the raw (unscaled) row.
  double decision(std::span<const double> row) const;
  /// Names outside the vocabulary were zero in every training row; their
  /// squared values add to the distance instead of being dropped.
  double decision(const SparseFeatureVector& features) const;
  /// decision >= 0, within kBoundaryTolerance.
  static bool in_class_decision(double decision) { return decision >= -kBoundaryTolerance; }
  bool in_class(std::span<const double> row) const { return in_class_decision(decision(row)); }
};

/// Trains on every row of `data`; labels are ignored.
OcsvmModel train_ocsvm(const LabeledDataset& data, const OcsvmConfig& config = {});

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

}  // namespace locflow::learn
