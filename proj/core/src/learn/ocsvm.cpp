#include "locflow/learn/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace locflow::learn {

MinMaxScaler MinMaxScaler::fit(const LabeledDataset& data) {
  MinMaxScaler s;
  const std::size_t d = data.features();
  s.lower.assign(d, std::numeric_limits<double>::infinity());
  s.upper.assign(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row(i);
    for (std::size_t f = 0; f < d; ++f) {
      s.lower[f] = std::min(s.lower[f], row[f]);
      s.upper[f] = std::max(s.upper[f], row[f]);
    }
  }
  if (data.empty()) {
    s.lower.assign(d, 0.0);
    s.upper.assign(d, 0.0);
  }
  return s;
}

std::vector<double> MinMaxScaler::transform(std::span<const double> row) const {
  std::vector<double> out(row.size(), 0.0);
  for (std::size_t f = 0; f < row.size(); ++f) {
    const double range = upper[f] - lower[f];
    out[f] = range > 0.0 ? (row[f] - lower[f]) / range : row[f] - lower[f];
  }
  return out;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

double one_class_duality_gap(std::span<const double> alpha, std::span<const double> gradient, double upper_bound) {
  // Dual objective D = -1/2 a'Ka. With w fixed by a, the primal is
  // 1/2 a'Ka + C sum max(0, rho - g_i) - rho minimized over rho, a convex
  // piecewise-linear function whose minimum sits at one of the g_i.
  double quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) quad += alpha[i] * gradient[i];
  std::vector<double> g(gradient.begin(), gradient.end());
  std::sort(g.begin(), g.end());
  double best = std::numeric_limits<double>::infinity();
  double prefix = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double value = upper_bound * (static_cast<double>(k) * g[k] - prefix) - g[k];
    best = std::min(best, value);
    prefix += g[k];
  }
  return quad + best;
}

OneClassDualSolution solve_one_class_dual(std::span<const double> kernel, std::size_t n, double nu, double tolerance,
                                          std::size_t max_iterations) {
  if (n == 0) throw TrainingError("one-class SVM: no training rows");
  if (!(nu > 0.0 && nu < 1.0)) throw TrainingError("one-class SVM: nu must lie in (0, 1)");
  if (kernel.size() != n * n) throw TrainingError("one-class SVM: kernel matrix has the wrong size");

  OneClassDualSolution sol;
  const double c = 1.0 / (nu * static_cast<double>(n));
  sol.upper_bound = c;
  sol.alpha.assign(n, 0.0);
  const auto full = static_cast<std::size_t>(std::floor(nu * static_cast<double>(n)));
  for (std::size_t i = 0; i < std::min(full, n); ++i) sol.alpha[i] = c;
  if (full < n) sol.alpha[full] = std::max(0.0, 1.0 - static_cast<double>(full) * c);

  auto q = [&](std::size_t i, std::size_t j) { return kernel[i * n + j]; };
  auto& alpha = sol.alpha;
  auto& grad = sol.gradient;
  grad.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0.0) continue;
    for (std::size_t t = 0; t < n; ++t) grad[t] += alpha[i] * q(i, t);
  }

  if (max_iterations == 0) max_iterations = std::max<std::size_t>(10'000'000, 100 * n);
  constexpr double kTau = 1e-12;
  const double inf = std::numeric_limits<double>::infinity();

  std::size_t iter = 0;
  while (true) {
    // i maximizes -G over {alpha < C}; the violation is -G_i + max G over {alpha > 0}.
    double gmax = -inf;
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] < c && -grad[t] > gmax) {
        gmax = -grad[t];
        i = t;
      }
    }
    double gmax2 = -inf;
    std::size_t j = n;
    double best_obj = inf;
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] <= 0.0) continue;
      gmax2 = std::max(gmax2, grad[t]);
      if (i == n) continue;
      const double b = gmax + grad[t];
      if (b <= 0.0) continue;
      double a = q(i, i) + q(t, t) - 2.0 * q(i, t);
      if (a <= 0.0) a = kTau;
      const double obj = -(b * b) / a;
      if (obj < best_obj) {
        best_obj = obj;
        j = t;
      }
    }
    sol.max_violation = (i == n || gmax2 == -inf) ? 0.0 : gmax + gmax2;
    if (sol.max_violation < tolerance || j == n) break;

    if (iter >= max_iterations) {
      const double gap = one_class_duality_gap(alpha, grad, c);
      throw OcsvmConvergenceError("one-class SVM: no convergence after " + std::to_string(iter) +
                                      " iterations (duality gap " + std::to_string(gap) + ")",
                                  gap);
    }
    ++iter;

    double a = q(i, i) + q(j, j) - 2.0 * q(i, j);
    if (a <= 0.0) a = kTau;
    double delta = (grad[j] - grad[i]) / a;
    const double room_i = c - alpha[i];
    const double room_j = alpha[j];
    bool i_hits_bound = false, j_hits_bound = false;
    if (delta >= room_i) delta = room_i, i_hits_bound = true;
    if (delta >= room_j) delta = room_j, j_hits_bound = true, i_hits_bound = (delta == room_i);
    alpha[i] = i_hits_bound ? c : alpha[i] + delta;
    alpha[j] = j_hits_bound ? 0.0 : alpha[j] - delta;
    for (std::size_t t = 0; t < n; ++t) grad[t] += delta * (q(t, i) - q(t, j));
  }
  sol.iterations = iter;

  double ub = inf, lb = -inf, free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] >= c) {
      lb = std::max(lb, grad[t]);
    } else if (alpha[t] <= 0.0) {
      ub = std::min(ub, grad[t]);
    } else {
      ++free_count;
      free_sum += grad[t];
    }
  }
  if (free_count > 0) {
    sol.rho = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    sol.rho = (ub + lb) / 2.0;
  } else {
    sol.rho = std::isfinite(ub) ? ub : lb;
  }
  sol.duality_gap = one_class_duality_gap(alpha, grad, c);
  return sol;
}

OcsvmModel train_ocsvm(const LabeledDataset& data, const OcsvmConfig& config) {
  if (data.empty()) throw TrainingError("one-class SVM: no training rows");
  const std::size_t n = data.rows();
  const std::size_t d = data.features();

  OcsvmModel model;
  model.vocabulary = data.vocabulary();
  model.scaler = MinMaxScaler::fit(data);
  model.nu = config.nu;
  model.gamma = config.gamma > 0.0 ? config.gamma : (d > 0 ? 1.0 / static_cast<double>(d) : 1.0);

  std::vector<std::vector<double>> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = model.scaler.transform(data.row(i));
  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    kernel[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) kernel[i * n + j] = kernel[j * n + i] = rbf_kernel(scaled[i], scaled[j], model.gamma);
  }

  const auto sol = solve_one_class_dual(kernel, n, config.nu, config.tolerance, config.max_iterations);
  model.rho = sol.rho;
  model.duality_gap = sol.duality_gap;
  model.iterations = sol.iterations;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.alpha[i] > 0.0) {
      model.coefficients.push_back(sol.alpha[i]);
      model.support_vectors.push_back(std::move(scaled[i]));
    }
  }
  return model;
}

namespace {

// Squared distance to each support vector gets `extra` added: the mass of
// features the training rows never had (all zero there).
double decision_with(const OcsvmModel& m, std::span<const double> row, double extra) {
  const auto x = m.scaler.transform(row);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.coefficients.size(); ++i) {
    double sq = extra;
    for (std::size_t f = 0; f < x.size(); ++f) {
      const double d = m.support_vectors[i][f] - x[f];
      sq += d * d;
    }
    sum += m.coefficients[i] * std::exp(-m.gamma * sq);
  }
  return sum - m.rho;
}

}  // namespace

double OcsvmModel::decision(std::span<const double> row) const { return decision_with(*this, row, 0.0); }

double OcsvmModel::decision(const SparseFeatureVector& features) const {
  double unseen = 0.0;
  for (const auto& [name, value] : features) {
    if (vocabulary.index_of(name) == vocabulary.size()) unseen += value * value;
  }
  return decision_with(*this, vocabulary.densify(features), unseen);
}

}  // namespace locflow::learn
