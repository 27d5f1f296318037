#include "locflow/common/random.hpp"

#include <cmath>
#include <numbers>

namespace locflow {

double standard_normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace locflow
