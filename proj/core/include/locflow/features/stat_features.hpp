#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "locflow/capture/flow.hpp"
#include "locflow/features/distribution.hpp"

namespace locflow::features {

inline constexpr std::size_t kStatFeatureCount = 31;

enum class StatBlock : std::size_t { all_sizes = 0, uplink_sizes = 1, downlink_sizes = 2, intervals = 3 };

/// The 31 statistical flow features, fixed order:
/// tcp_count, uplink_tcp_count, http_count, then seven statistics for each of
/// all packet sizes, uplink sizes, downlink sizes and inter-arrival times (ms).
class StatVector {
 public:
  using Values = std::array<double, kStatFeatureCount>;

  StatVector() { values_.fill(0.0); }
  explicit StatVector(const Values& values) : values_(values) {}

  static const std::array<std::string_view, kStatFeatureCount>& names();
  static std::optional<std::size_t> index_of(std::string_view name);

  double operator[](std::size_t i) const { return values_[i]; }
  const Values& values() const { return values_; }

  double tcp_count() const { return values_[0]; }
  double uplink_tcp_count() const { return values_[1]; }
  double http_count() const { return values_[2]; }
  DistributionStats block(StatBlock b) const;

 private:
  Values values_;
};

StatVector stat_features(const capture::HttpFlow& flow);

}  // namespace locflow::features
