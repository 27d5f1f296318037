#include "locflow/capture/sessionize.hpp"

#include <limits>
#include <map>

namespace locflow::capture {

std::vector<HttpFlow> sessionize(std::span<const PacketMeta> packets, const SessionizeOptions& options,
                                 SessionizeDiagnostics* diagnostics) {
  SessionizeDiagnostics diag;
  std::vector<HttpFlow> flows;
  std::map<FourTuple, std::size_t> open;
  double previous = -std::numeric_limits<double>::infinity();

  for (const auto& packet : packets) {
    if (!packet.valid() || packet.timestamp < previous) {
      ++diag.malformed;
      continue;
    }
    previous = packet.timestamp;
    ++diag.accepted;

    const FourTuple key = packet.direction == Direction::uplink ? packet.four_tuple : packet.four_tuple.reversed();
    auto it = open.find(key);
    if (it != open.end()) {
      auto& flow = flows[it->second];
      if (packet.timestamp - flow.packets.back().timestamp <= options.idle_timeout) {
        flow.packets.push_back(packet);
        continue;
      }
    }
    HttpFlow flow;
    flow.key = key;
    flow.packets.push_back(packet);
    flows.push_back(std::move(flow));
    open.insert_or_assign(key, flows.size() - 1);
  }

  if (diagnostics) *diagnostics = diag;
  return flows;
}

}  // namespace locflow::capture
