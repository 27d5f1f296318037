#include "locflow/capture/flow.hpp"

#include <array>
#include <cmath>
#include <string_view>

#include "locflow/common/text.hpp"

namespace locflow::capture {

namespace {

std::string endpoint(const std::string& ip, std::uint16_t port) {
  if (ip.find(':') != std::string::npos) return "[" + ip + "]:" + std::to_string(port);
  return ip + ":" + std::to_string(port);
}

constexpr std::array<std::string_view, 9> kMethods = {"GET",   "POST",    "PUT",     "DELETE", "HEAD",
                                                      "PATCH", "OPTIONS", "CONNECT", "TRACE"};

}  // namespace

std::string FourTuple::to_string() const {
  return endpoint(src_ip, src_port) + ">" + endpoint(dst_ip, dst_port);
}

bool PacketMeta::valid() const {
  return std::isfinite(timestamp) && timestamp >= 0.0 && total_len >= tcp_payload_len &&
         payload.size() <= tcp_payload_len && !four_tuple.src_ip.empty() && !four_tuple.dst_ip.empty();
}

std::string HttpFlow::id() const {
  const auto micros = static_cast<long long>(std::llround(start_time() * 1e6));
  return key.to_string() + "@" + std::to_string(micros);
}

bool starts_with_method(std::string_view payload) {
  for (auto m : kMethods) {
    if (payload.size() > m.size() && payload.substr(0, m.size()) == m && payload[m.size()] == ' ') return true;
  }
  return false;
}

bool looks_like_http(std::string_view payload) {
  return starts_with_method(payload) || payload.starts_with("HTTP/1.") || payload.starts_with("HTTP/2");
}

}  // namespace locflow::capture
