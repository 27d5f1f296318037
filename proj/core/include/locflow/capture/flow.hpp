#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace locflow::capture {

enum class Direction : std::uint8_t { uplink, downlink };

/// Oriented TCP conversation key. For a flow key, `src` is the device side.
struct FourTuple {
  std::string src_ip;
  std::uint16_t src_port = 0;
  std::string dst_ip;
  std::uint16_t dst_port = 0;

  FourTuple reversed() const { return {dst_ip, dst_port, src_ip, src_port}; }
  std::string to_string() const;

  friend auto operator<=>(const FourTuple&, const FourTuple&) = default;
};

struct PacketMeta {
  double timestamp = 0.0;  // seconds, microsecond resolution
  Direction direction = Direction::uplink;
  std::uint32_t tcp_payload_len = 0;
  std::uint32_t total_len = 0;  // on-the-wire frame length
  bool has_http_layer = false;
  FourTuple four_tuple;  // as observed on the wire (src -> dst)
  /// Captured TCP payload bytes; may be shorter than tcp_payload_len when the
  /// capture was truncated, and is empty for flows loaded from flow records.
  std::string payload;

  /// Structural validity: finite non-negative timestamp, length ordering,
  /// non-empty addresses.
  bool valid() const;
};

struct HttpRequest {
  std::string method;
  std::string host;
  std::string path;
  std::string full_url;  // host + path, no scheme

  friend bool operator==(const HttpRequest&, const HttpRequest&) = default;
};

struct Coordinates {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const Coordinates&, const Coordinates&) = default;
};

struct HttpFlow {
  FourTuple key;
  std::vector<PacketMeta> packets;
  std::vector<HttpRequest> requests;
  std::optional<std::string> source_instance_id;
  std::optional<bool> taint_location;

  double start_time() const { return packets.empty() ? 0.0 : packets.front().timestamp; }
  /// Stable identifier: "<key>@<first packet time in microseconds>".
  std::string id() const;
};

/// True when the uplink payload prefix carries an HTTP request or response line.
bool looks_like_http(std::string_view payload);

}  // namespace locflow::capture
