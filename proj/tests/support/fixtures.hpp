#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "locflow/capture/flow.hpp"
#include "locflow/common/random.hpp"

namespace fixture {

inline locflow::capture::PacketMeta packet(double t, locflow::capture::Direction dir, std::uint32_t size,
                                           bool http = false) {
  locflow::capture::PacketMeta p;
  p.timestamp = t;
  p.direction = dir;
  p.total_len = size;
  p.tcp_payload_len = size >= 54 ? size - 54 : 0;
  p.has_http_layer = http;
  const locflow::capture::FourTuple key{"10.0.0.2", 40000, "93.184.216.34", 80};
  p.four_tuple = dir == locflow::capture::Direction::uplink ? key : key.reversed();
  return p;
}

inline locflow::capture::HttpRequest request(std::string host, std::string path) {
  return {"GET", host, path, host + path};
}

// Random flow with 1..40 packets; sizes and gaps drawn wide enough to exercise
// every moment (including exact ties and single-direction flows).
inline locflow::capture::HttpFlow random_flow(locflow::Rng& rng) {
  using locflow::capture::Direction;
  locflow::capture::HttpFlow f;
  f.key = {"10.0.0.2", 40000, "93.184.216.34", 80};
  const auto n = 1 + locflow::uniform_below(rng, 40);
  const bool one_way = locflow::uniform_below(rng, 10) == 0;
  double t = 1000.0 + locflow::uniform_unit(rng);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto dir = one_way || locflow::uniform_below(rng, 2) ? Direction::uplink : Direction::downlink;
    const auto size = static_cast<std::uint32_t>(54 + locflow::uniform_below(rng, 1460));
    f.packets.push_back(packet(t, dir, locflow::uniform_below(rng, 8) == 0 ? 1514 : size,
                               locflow::uniform_below(rng, 3) == 0));
    t += locflow::uniform_below(rng, 5) == 0 ? 0.0 : locflow::uniform_unit(rng) * 2.0;
  }
  return f;
}

// Fresh directory under the system temp dir, removed first if present.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("locflow-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixture
