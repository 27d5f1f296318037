#include "locflow/features/stat_features.hpp"

#include <string>
#include <vector>

namespace locflow::features {

namespace {

constexpr std::array<std::string_view, kStatFeatureCount> kNames = {
    "tcp_count",          "uplink_tcp_count",   "http_count",          "size_all_min",      "size_all_max",
    "size_all_median",    "size_all_mean",      "size_all_std_dev",    "size_all_skewness", "size_all_kurtosis",
    "size_up_min",        "size_up_max",        "size_up_median",      "size_up_mean",      "size_up_std_dev",
    "size_up_skewness",   "size_up_kurtosis",   "size_down_min",       "size_down_max",     "size_down_median",
    "size_down_mean",     "size_down_std_dev",  "size_down_skewness",  "size_down_kurtosis", "interval_min",
    "interval_max",       "interval_median",    "interval_mean",       "interval_std_dev",  "interval_skewness",
    "interval_kurtosis"};

constexpr std::size_t kCountFields = 3;

}  // namespace

const std::array<std::string_view, kStatFeatureCount>& StatVector::names() { return kNames; }

std::optional<std::size_t> StatVector::index_of(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return i;
  }
  return std::nullopt;
}

DistributionStats StatVector::block(StatBlock b) const {
  const std::size_t base = kCountFields + 7 * static_cast<std::size_t>(b);
  return {values_[base],     values_[base + 1], values_[base + 2], values_[base + 3],
          values_[base + 4], values_[base + 5], values_[base + 6]};
}

StatVector stat_features(const capture::HttpFlow& flow) {
  std::vector<double> all, up, down, intervals;
  all.reserve(flow.packets.size());
  double http = 0.0;
  for (std::size_t i = 0; i < flow.packets.size(); ++i) {
    const auto& p = flow.packets[i];
    const double size = static_cast<double>(p.total_len);
    all.push_back(size);
    (p.direction == capture::Direction::uplink ? up : down).push_back(size);
    if (p.has_http_layer) http += 1.0;
    if (i > 0) intervals.push_back((p.timestamp - flow.packets[i - 1].timestamp) * 1000.0);
  }

  StatVector::Values v{};
  v[0] = static_cast<double>(all.size());
  v[1] = static_cast<double>(up.size());
  v[2] = http;
  std::size_t offset = kCountFields;
  for (const auto* sample : {&all, &up, &down, &intervals}) {
    for (double stat : distribution_stats(*sample).as_array()) v[offset++] = stat;
  }
  return StatVector(v);
}

}  // namespace locflow::features
