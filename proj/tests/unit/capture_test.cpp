#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "locflow/capture/coordinates.hpp"
#include "locflow/capture/flow_io.hpp"
#include "locflow/capture/http_parser.hpp"
#include "locflow/capture/pcap.hpp"
#include "locflow/capture/sessionize.hpp"
#include "locflow/common/errors.hpp"

using namespace locflow;
using namespace locflow::capture;

namespace {

PacketMeta on(FourTuple t, double ts, Direction d = Direction::uplink, std::uint32_t len = 100) {
  PacketMeta p;
  p.timestamp = ts;
  p.direction = d;
  p.total_len = len;
  p.tcp_payload_len = len - 54;
  p.four_tuple = d == Direction::uplink ? t : t.reversed();
  return p;
}

const FourTuple kKey{"10.0.0.2", 40000, "1.2.3.4", 80};

HttpFlow flow_with_payloads(std::vector<std::string> payloads) {
  HttpFlow f;
  f.key = kKey;
  double t = 0;
  for (auto& s : payloads) {
    auto p = on(kKey, t += 0.01);
    p.payload = s;
    p.tcp_payload_len = static_cast<std::uint32_t>(s.size());
    p.total_len = p.tcp_payload_len + 54;
    f.packets.push_back(p);
  }
  return f;
}

}  // namespace

TEST(Sessionize, EmptyStream) { EXPECT_TRUE(sessionize({}).empty()); }

TEST(Sessionize, SameTupleWithinTimeoutIsOneFlow) {
  std::vector<PacketMeta> pk{on(kKey, 1.0), on(kKey, 1.5, Direction::downlink)};
  auto flows = sessionize(pk);
  ASSERT_EQ(flows.size(), 1u);
  EXPECT_EQ(flows[0].packets.size(), 2u);
  EXPECT_EQ(flows[0].key, kKey);
}

TEST(Sessionize, DifferentDstPortSplits) {
  auto other = kKey;
  other.dst_port = 8080;
  std::vector<PacketMeta> pk{on(kKey, 1.0), on(other, 1.1)};
  auto flows = sessionize(pk);
  ASSERT_EQ(flows.size(), 2u);
  EXPECT_EQ(flows[0].packets.size(), 1u);
  EXPECT_EQ(flows[1].packets.size(), 1u);
}

TEST(Sessionize, IdleGapStartsNewSession) {
  std::vector<PacketMeta> pk{on(kKey, 0.0), on(kKey, 10.0), on(kKey, 100.0)};
  auto flows = sessionize(pk, {.idle_timeout = 60.0});
  ASSERT_EQ(flows.size(), 2u);
  EXPECT_EQ(flows[0].packets.size(), 2u);
  EXPECT_EQ(flows[1].packets.size(), 1u);
  EXPECT_NE(flows[0].id(), flows[1].id());
}

TEST(Sessionize, MalformedRecordsAreCountedNotFatal) {
  auto bad = on(kKey, 2.0);
  bad.tcp_payload_len = bad.total_len + 1;
  auto neg = on(kKey, 3.0);
  neg.timestamp = -1.0;
  std::vector<PacketMeta> pk{on(kKey, 1.0), bad, neg, on(kKey, 4.0)};
  SessionizeDiagnostics diag;
  auto flows = sessionize(pk, {}, &diag);
  EXPECT_EQ(diag.malformed, 2u);
  EXPECT_EQ(diag.accepted, 2u);
  ASSERT_EQ(flows.size(), 1u);
  EXPECT_EQ(flows[0].packets.size(), 2u);
}

TEST(Sessionize, PartitionAndGapProperties) {
  Rng rng(11);
  std::vector<PacketMeta> pk;
  double t = 0;
  for (int i = 0; i < 2000; ++i) {
    FourTuple k{"10.0.0." + std::to_string(uniform_below(rng, 3)), static_cast<std::uint16_t>(40000 + uniform_below(rng, 4)),
                "1.2.3.4", 80};
    t += uniform_unit(rng) * 20;
    pk.push_back(on(k, t, uniform_below(rng, 2) ? Direction::uplink : Direction::downlink));
  }
  const double timeout = 30.0;
  auto flows = sessionize(pk, {.idle_timeout = timeout});
  std::size_t total = 0;
  std::multiset<double> seen;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const auto& f = flows[i];
    total += f.packets.size();
    if (i) EXPECT_LE(flows[i - 1].start_time(), f.start_time());
    for (std::size_t j = 0; j < f.packets.size(); ++j) {
      const auto& p = f.packets[j];
      seen.insert(p.timestamp);
      EXPECT_TRUE(p.four_tuple == f.key || p.four_tuple == f.key.reversed());
      if (j) {
        EXPECT_LE(p.timestamp - f.packets[j - 1].timestamp, timeout);
      }
    }
  }
  EXPECT_EQ(total, pk.size());
  std::multiset<double> expected;
  for (auto& p : pk) expected.insert(p.timestamp);
  EXPECT_EQ(seen, expected);
  EXPECT_EQ(sessionize(pk, {.idle_timeout = timeout}).size(), flows.size());
}

TEST(ParseHttp, RequestLineAndHost) {
  auto f = flow_with_payloads({"GET /weather/geo?lat=1 HTTP/1.1\r\nHost: v.juhe.cn\r\n\r\n"});
  auto reqs = parse_http(f);
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0].method, "GET");
  EXPECT_EQ(reqs[0].host, "v.juhe.cn");
  EXPECT_EQ(reqs[0].path, "/weather/geo?lat=1");
  EXPECT_EQ(reqs[0].full_url, "v.juhe.cn/weather/geo?lat=1");
}

TEST(ParseHttp, NonHttpPayload) { EXPECT_TRUE(parse_http(flow_with_payloads({"hello"})).empty()); }

TEST(ParseHttp, TwoRequestsInPacketOrder) {
  auto f = flow_with_payloads({"GET /a HTTP/1.1\r\nHost: x.com\r\n\r\n", "POST /b HTTP/1.1\r\nHost: y.com\r\n\r\n"});
  auto reqs = parse_http(f);
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_EQ(reqs[0].full_url, "x.com/a");
  EXPECT_EQ(reqs[1].method, "POST");
  EXPECT_EQ(reqs[1].full_url, "y.com/b");
}

TEST(ParseHttp, MissingHostFallsBackToServerAddress) {
  auto reqs = parse_http(flow_with_payloads({"GET /x HTTP/1.0\r\n\r\n"}));
  ASSERT_EQ(reqs.size(), 1u);
  EXPECT_EQ(reqs[0].host, "1.2.3.4");
}

TEST(ParseHttp, DownlinkPayloadIgnored) {
  auto f = flow_with_payloads({"GET /a HTTP/1.1\r\nHost: x.com\r\n\r\n"});
  auto p = on(kKey, 1.0, Direction::downlink);
  p.payload = "GET /fake HTTP/1.1\r\nHost: z\r\n\r\n";
  f.packets.push_back(p);
  EXPECT_EQ(parse_http(f).size(), 1u);
}

TEST(Coordinates, ReferenceUrls) {
  auto a = detect_coordinates("ads.appsgeyser.com/?&guid=a5141e1d&tlat=38.53203&tlon=-121.759603&p=android&test=1");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->lat, 38.53203);
  EXPECT_EQ(a->lon, -121.759603);
  auto b = detect_coordinates("v.juhe.cn/weather/geo?&lon=-121.750683&lat=38.540323");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->lat, 38.540323);
  EXPECT_EQ(b->lon, -121.750683);
}

TEST(Coordinates, Absent) {
  EXPECT_FALSE(detect_coordinates("example.com/index.html"));
  EXPECT_FALSE(detect_coordinates(""));
}

TEST(Coordinates, OutOfRangeRejected) { EXPECT_FALSE(detect_coordinates("x.com/?lat=95.1&lon=10.0")); }

TEST(Coordinates, CaseInsensitiveKeysAndBareFallback) {
  auto a = detect_coordinates("x.com/?LAT=10.5&LNG=20.25");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->lat, 10.5);
  EXPECT_EQ(a->lon, 20.25);
  auto b = detect_coordinates("x.com/pos/38.5320,-121.7596/tile");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->lat, 38.532);
  EXPECT_EQ(b->lon, -121.7596);
  EXPECT_FALSE(detect_coordinates("x.com/v/1.2,3.4"));  // too few fraction digits
}

TEST(Coordinates, SoundOnRandomStrings) {
  Rng rng(3);
  const std::string alphabet = "lat=on-.0123456789&?/,g";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    for (int j = 0; j < 40; ++j) s.push_back(alphabet[uniform_below(rng, alphabet.size())]);
    if (auto c = detect_coordinates(s)) {
      EXPECT_LE(std::abs(c->lat), 90.0);
      EXPECT_LE(std::abs(c->lon), 180.0);
    }
  }
}

TEST(Pcap, WriteReadRoundTrip) {
  std::vector<TcpFrameSpec> frames;
  frames.push_back({1.5, kKey, 0x18, "GET / HTTP/1.1\r\nHost: a.b\r\n\r\n", 0});
  frames.back().payload_len = static_cast<std::uint32_t>(frames.back().payload.size());
  frames.push_back({1.75, kKey.reversed(), 0x18, "HTTP/1.1 200 OK\r\n", 1400});
  const auto bytes = write_pcap(frames);
  auto res = read_pcap({reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()},
                       {.device_ips = {"10.0.0.2"}});
  ASSERT_EQ(res.packets.size(), 2u);
  EXPECT_EQ(res.diagnostics.tcp_packets, 2u);
  EXPECT_EQ(res.packets[0].direction, Direction::uplink);
  EXPECT_EQ(res.packets[1].direction, Direction::downlink);
  EXPECT_EQ(res.packets[1].tcp_payload_len, 1400u);
  EXPECT_EQ(res.packets[1].total_len, 1400u + kEthernetIpv4TcpOverhead);
  EXPECT_DOUBLE_EQ(res.packets[0].timestamp, 1.5);
  EXPECT_TRUE(res.packets[0].has_http_layer);
  auto flows = sessionize(res.packets);
  ASSERT_EQ(flows.size(), 1u);
  attach_requests(flows);
  ASSERT_EQ(flows[0].requests.size(), 1u);
  EXPECT_EQ(flows[0].requests[0].host, "a.b");
}

TEST(Pcap, BadHeaderIsDataError) {
  const std::string junk = "not a pcap file at all";
  EXPECT_THROW(read_pcap({reinterpret_cast<const std::uint8_t*>(junk.data()), junk.size()}), DataError);
}

TEST(Pcap, TruncatedRecordCountedNotFatal) {
  std::vector<TcpFrameSpec> frames{{1.0, kKey, 0x18, "abc", 3}, {2.0, kKey, 0x18, "def", 3}};
  auto bytes = write_pcap(frames);
  bytes.resize(bytes.size() - 10);
  auto res = read_pcap({reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()});
  EXPECT_EQ(res.packets.size(), 1u);
  EXPECT_GE(res.diagnostics.malformed, 1u);
}

TEST(FlowRecords, RoundTripKeepsRequestsAndAnnotations) {
  auto f = flow_with_payloads({"GET /a?lat=1.0 HTTP/1.1\r\nHost: x.com\r\n\r\n"});
  f.requests = parse_http(f);
  f.source_instance_id = "inst-1";
  f.taint_location = true;
  std::stringstream ss;
  write_flow_records(ss, {f});
  auto back = read_flow_records(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id(), f.id());
  EXPECT_EQ(back[0].requests, f.requests);
  EXPECT_EQ(back[0].source_instance_id, f.source_instance_id);
  EXPECT_EQ(back[0].taint_location, f.taint_location);
  ASSERT_EQ(back[0].packets.size(), 1u);
  EXPECT_EQ(back[0].packets[0].total_len, f.packets[0].total_len);
}

TEST(FlowRecords, WrongSchemaRejected) {
  std::stringstream ss(R"({"schema":"locflow.flow/9","key":{}})" "\n");
  EXPECT_THROW(read_flow_records(ss), SchemaError);
}

TEST(FlowAnnotations, AppliedByKeyAndWindow) {
  std::vector<HttpFlow> flows{flow_with_payloads({"x"})};
  std::vector<FlowAnnotation> ann{{kKey, 5.0, 6.0, "late", true}, {kKey, 0.0, 1.0, "inst-7", false}};
  EXPECT_EQ(apply_annotations(flows, ann), 1u);
  EXPECT_EQ(flows[0].source_instance_id, "inst-7");
  EXPECT_EQ(flows[0].taint_location, false);
  std::stringstream ss;
  write_flow_annotations(ss, ann);
  auto back = read_flow_annotations(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].instance_id, "inst-7");
}
