#include "locflow/capture/pcap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <utility>

#include "locflow/common/atomic_file.hpp"
#include "locflow/common/errors.hpp"

namespace locflow::capture {

namespace {

constexpr std::uint32_t kMagicMicro = 0xa1b2c3d4;
constexpr std::uint32_t kMagicNano = 0xa1b23c4d;

constexpr std::uint32_t kLinkNull = 0;
constexpr std::uint32_t kLinkEthernet = 1;
constexpr std::uint32_t kLinkRawAlt = 12;
constexpr std::uint32_t kLinkRaw = 101;
constexpr std::uint32_t kLinkLinuxSll = 113;

constexpr std::uint8_t kTcpSyn = 0x02;
constexpr std::uint8_t kTcpAck = 0x10;

std::uint32_t bswap32(std::uint32_t v) {
  return (v >> 24) | ((v >> 8) & 0xff00) | ((v << 8) & 0xff0000) | (v << 24);
}

std::uint16_t be16(const std::uint8_t* p) { return static_cast<std::uint16_t>((p[0] << 8) | p[1]); }

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, bool swap) : bytes_(bytes), swap_(swap) {}
  bool has(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::uint32_t u32() {
    std::uint32_t v;
    std::memcpy(&v, bytes_.data() + pos_, 4);
    pos_ += 4;
    return swap_ ? bswap32(v) : v;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ >= bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  bool swap_;
};

std::string ipv4_text(const std::uint8_t* p) {
  return std::to_string(p[0]) + "." + std::to_string(p[1]) + "." + std::to_string(p[2]) + "." + std::to_string(p[3]);
}

std::string ipv6_text(const std::uint8_t* p) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (int g = 0; g < 8; ++g) {
    if (g) out.push_back(':');
    const unsigned v = static_cast<unsigned>((p[2 * g] << 8) | p[2 * g + 1]);
    bool leading = true;
    for (int shift = 12; shift >= 0; shift -= 4) {
      const unsigned nib = (v >> shift) & 0xf;
      if (leading && nib == 0 && shift != 0) continue;
      leading = false;
      out.push_back(kHex[nib]);
    }
  }
  return out;
}

enum class Decode { ok, non_tcp, malformed, unsupported_link };

struct Decoded {
  FourTuple wire;
  std::uint8_t flags = 0;
  std::uint32_t payload_len = 0;
  std::string payload;
};

Decode decode_tcp(std::span<const std::uint8_t> l4, std::uint32_t l4_len, Decoded& out) {
  if (l4.size() < 20 || l4_len < 20) return Decode::malformed;
  out.wire.src_port = be16(l4.data());
  out.wire.dst_port = be16(l4.data() + 2);
  const std::uint32_t offset = (l4[12] >> 4) * 4u;
  if (offset < 20 || offset > l4_len) return Decode::malformed;
  out.flags = l4[13];
  out.payload_len = l4_len - offset;
  if (l4.size() > offset) {
    const auto captured = std::min<std::size_t>(l4.size() - offset, out.payload_len);
    out.payload.assign(reinterpret_cast<const char*>(l4.data() + offset), captured);
  }
  return Decode::ok;
}

Decode decode_ip(std::span<const std::uint8_t> ip, Decoded& out) {
  if (ip.empty()) return Decode::malformed;
  const int version = ip[0] >> 4;
  if (version == 4) {
    if (ip.size() < 20) return Decode::malformed;
    const std::uint32_t ihl = (ip[0] & 0x0f) * 4u;
    const std::uint32_t total = be16(ip.data() + 2);
    if (ihl < 20 || total < ihl || ip.size() < ihl) return Decode::malformed;
    if ((be16(ip.data() + 6) & 0x1fff) != 0) return Decode::non_tcp;
    if (ip[9] != 6) return Decode::non_tcp;
    out.wire.src_ip = ipv4_text(ip.data() + 12);
    out.wire.dst_ip = ipv4_text(ip.data() + 16);
    const auto captured = ip.subspan(ihl, std::min<std::size_t>(ip.size(), total) - ihl);
    return decode_tcp(captured, total - ihl, out);
  }
  if (version == 6) {
    if (ip.size() < 40) return Decode::malformed;
    if (ip[6] != 6) return Decode::non_tcp;
    const std::uint32_t payload = be16(ip.data() + 4);
    out.wire.src_ip = ipv6_text(ip.data() + 8);
    out.wire.dst_ip = ipv6_text(ip.data() + 24);
    const auto captured = ip.subspan(40, std::min<std::size_t>(ip.size() - 40, payload));
    return decode_tcp(captured, payload, out);
  }
  return Decode::malformed;
}

Decode decode_frame(std::uint32_t link, std::span<const std::uint8_t> frame, Decoded& out) {
  switch (link) {
    case kLinkEthernet: {
      std::size_t off = 12;
      if (frame.size() < 14) return Decode::malformed;
      std::uint16_t type = be16(frame.data() + off);
      off += 2;
      while (type == 0x8100 || type == 0x88a8) {
        if (frame.size() < off + 4) return Decode::malformed;
        type = be16(frame.data() + off + 2);
        off += 4;
      }
      if (type != 0x0800 && type != 0x86dd) return Decode::non_tcp;
      return decode_ip(frame.subspan(off), out);
    }
    case kLinkRaw:
    case kLinkRawAlt:
      return decode_ip(frame, out);
    case kLinkLinuxSll: {
      if (frame.size() < 16) return Decode::malformed;
      const std::uint16_t type = be16(frame.data() + 14);
      if (type != 0x0800 && type != 0x86dd) return Decode::non_tcp;
      return decode_ip(frame.subspan(16), out);
    }
    case kLinkNull: {
      if (frame.size() < 4) return Decode::malformed;
      return decode_ip(frame.subspan(4), out);
    }
    default:
      return Decode::unsupported_link;
  }
}

using Endpoint = std::pair<std::string, std::uint16_t>;

// Remembers which side of each connection is the device.
class DirectionResolver {
 public:
  explicit DirectionResolver(const std::set<std::string>& device_ips) : device_ips_(device_ips) {}

  Direction resolve(const Decoded& d) {
    if (!device_ips_.empty()) {
      if (device_ips_.count(d.wire.src_ip)) return Direction::uplink;
      if (device_ips_.count(d.wire.dst_ip)) return Direction::downlink;
    }
    Endpoint a{d.wire.src_ip, d.wire.src_port};
    Endpoint b{d.wire.dst_ip, d.wire.dst_port};
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    const bool syn = (d.flags & kTcpSyn) != 0;
    const bool ack = (d.flags & kTcpAck) != 0;
    auto it = client_.find(key);
    if (it == client_.end() || (syn && !ack)) {
      Endpoint client = a;
      if (syn && ack) {
        client = b;
      } else if (!syn && d.payload.starts_with("HTTP/")) {
        client = b;
      }
      it = client_.insert_or_assign(key, client).first;
    }
    return it->second == a ? Direction::uplink : Direction::downlink;
  }

 private:
  const std::set<std::string>& device_ips_;
  std::map<std::pair<Endpoint, Endpoint>, Endpoint> client_;
};

void put16be(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v >> 8));
  out.push_back(static_cast<char>(v & 0xff));
}

void put32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_ipv4(std::string& out, const std::string& dotted) {
  unsigned a = 0, b = 0, c = 0, d = 0;
  if (std::sscanf(dotted.c_str(), "%u.%u.%u.%u", &a, &b, &c, &d) != 4 || a > 255 || b > 255 || c > 255 || d > 255)
    throw DataError("write_pcap needs dotted IPv4 addresses, got '" + dotted + "'");
  for (unsigned v : {a, b, c, d}) out.push_back(static_cast<char>(v));
}

}  // namespace

PcapReadResult read_pcap(std::span<const std::uint8_t> bytes, const PcapReadOptions& options) {
  if (bytes.size() < 24) throw DataError("pcap: file shorter than global header");
  std::uint32_t magic;
  std::memcpy(&magic, bytes.data(), 4);
  bool swap = false;
  bool nanos = false;
  if (magic == kMagicMicro || magic == kMagicNano) {
    nanos = magic == kMagicNano;
  } else if (bswap32(magic) == kMagicMicro || bswap32(magic) == kMagicNano) {
    swap = true;
    nanos = bswap32(magic) == kMagicNano;
  } else {
    throw DataError("pcap: unrecognized magic number");
  }

  Reader reader(bytes, swap);
  reader.take(20);
  const std::uint32_t link = reader.u32();

  PcapReadResult result;
  DirectionResolver directions(options.device_ips);
  while (!reader.at_end()) {
    if (!reader.has(16)) {
      ++result.diagnostics.malformed;
      break;
    }
    const std::uint32_t ts_sec = reader.u32();
    const std::uint32_t ts_frac = reader.u32();
    const std::uint32_t incl = reader.u32();
    const std::uint32_t orig = reader.u32();
    ++result.diagnostics.records;
    if (!reader.has(incl) || incl > orig) {
      ++result.diagnostics.malformed;
      break;
    }
    const auto frame = reader.take(incl);

    Decoded decoded;
    switch (decode_frame(link, frame, decoded)) {
      case Decode::non_tcp:
        ++result.diagnostics.non_tcp;
        continue;
      case Decode::malformed:
        ++result.diagnostics.malformed;
        continue;
      case Decode::unsupported_link:
        ++result.diagnostics.unsupported_link;
        continue;
      case Decode::ok:
        break;
    }
    if (orig < decoded.payload_len) {
      ++result.diagnostics.malformed;
      continue;
    }

    PacketMeta packet;
    const double frac = nanos ? std::floor(ts_frac / 1000.0) * 1e-6 : ts_frac * 1e-6;
    packet.timestamp = static_cast<double>(ts_sec) + frac;
    packet.direction = directions.resolve(decoded);
    packet.tcp_payload_len = decoded.payload_len;
    packet.total_len = orig;
    packet.has_http_layer = looks_like_http(decoded.payload);
    packet.four_tuple = std::move(decoded.wire);
    packet.payload = std::move(decoded.payload);
    result.packets.push_back(std::move(packet));
    ++result.diagnostics.tcp_packets;
  }

  std::stable_sort(result.packets.begin(), result.packets.end(),
                   [](const PacketMeta& a, const PacketMeta& b) { return a.timestamp < b.timestamp; });
  return result;
}

PcapReadResult read_pcap_file(const std::filesystem::path& path, const PcapReadOptions& options) {
  const auto contents = read_file(path);
  return read_pcap({reinterpret_cast<const std::uint8_t*>(contents.data()), contents.size()}, options);
}

std::string write_pcap(std::span<const TcpFrameSpec> frames) {
  std::string out;
  put32le(out, kMagicMicro);
  out.push_back(2), out.push_back(0);  // version 2.4
  out.push_back(4), out.push_back(0);
  put32le(out, 0);
  put32le(out, 0);
  put32le(out, 65535);
  put32le(out, kLinkEthernet);

  for (const auto& f : frames) {
    const std::uint32_t payload_len = std::max<std::uint32_t>(f.payload_len, static_cast<std::uint32_t>(f.payload.size()));
    const std::uint32_t orig = kEthernetIpv4TcpOverhead + payload_len;
    const std::uint32_t incl = kEthernetIpv4TcpOverhead + static_cast<std::uint32_t>(f.payload.size());
    const double whole = std::floor(f.timestamp);
    auto micros = static_cast<std::uint32_t>(std::llround((f.timestamp - whole) * 1e6));
    auto secs = static_cast<std::uint32_t>(whole);
    if (micros >= 1000000) secs += 1, micros -= 1000000;
    put32le(out, secs);
    put32le(out, micros);
    put32le(out, incl);
    put32le(out, orig);

    out.append("\x02\x00\x00\x00\x00\x02", 6);  // dst mac
    out.append("\x02\x00\x00\x00\x00\x01", 6);  // src mac
    put16be(out, 0x0800);

    out.push_back(0x45);
    out.push_back(0);
    put16be(out, static_cast<std::uint16_t>(20 + 20 + payload_len));
    put16be(out, 0);
    put16be(out, 0x4000);  // DF
    out.push_back(64);
    out.push_back(6);
    put16be(out, 0);  // checksum not computed
    put_ipv4(out, f.tuple.src_ip);
    put_ipv4(out, f.tuple.dst_ip);

    put16be(out, f.tuple.src_port);
    put16be(out, f.tuple.dst_port);
    put32le(out, 0);  // seq
    put32le(out, 0);  // ack
    out.push_back(0x50);
    out.push_back(static_cast<char>(f.tcp_flags));
    put16be(out, 65535);
    put16be(out, 0);
    put16be(out, 0);
    out += f.payload;
  }
  return out;
}

}  // namespace locflow::capture
