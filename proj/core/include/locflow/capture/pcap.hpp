#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/capture/flow.hpp"

namespace locflow::capture {

struct PcapDiagnostics {
  std::size_t records = 0;
  std::size_t tcp_packets = 0;
  std::size_t non_tcp = 0;      // ARP, UDP, ICMP, non-first IPv4 fragments
  std::size_t malformed = 0;    // truncated or inconsistent headers
  std::size_t unsupported_link = 0;
};

struct PcapReadOptions {
  /// Addresses of the monitored device. When set, packets from these addresses
  /// are uplink. Otherwise orientation follows the TCP handshake or, lacking
  /// one, the first packet seen on the connection.
  std::set<std::string> device_ips;
};

struct PcapReadResult {
  std::vector<PacketMeta> packets;  // stable-sorted by timestamp
  PcapDiagnostics diagnostics;
};

/// Decodes a classic libpcap capture (either byte order, micro- or
/// nanosecond timestamps). Throws DataError if the global header is invalid;
/// bad records are counted, not fatal.
PcapReadResult read_pcap(std::span<const std::uint8_t> bytes, const PcapReadOptions& options = {});
PcapReadResult read_pcap_file(const std::filesystem::path& path, const PcapReadOptions& options = {});

/// One frame for the writer. Addresses are dotted IPv4.
struct TcpFrameSpec {
  double timestamp = 0.0;
  FourTuple tuple;  // wire orientation
  std::uint8_t tcp_flags = 0x18;  // PSH|ACK
  std::string payload;             // captured bytes
  std::uint32_t payload_len = 0;   // on-the-wire payload length (>= payload.size())
};

/// Encodes Ethernet/IPv4/TCP frames as a little-endian microsecond pcap.
/// Bytes beyond `payload` are not stored (caplen < orig_len).
std::string write_pcap(std::span<const TcpFrameSpec> frames);

inline constexpr std::uint32_t kEthernetIpv4TcpOverhead = 14 + 20 + 20;

}  // namespace locflow::capture
