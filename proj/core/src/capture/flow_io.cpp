#include "locflow/capture/flow_io.hpp"

#include <map>
#include <sstream>

#include "../common/json_util.hpp"
#include "locflow/common/schema.hpp"

namespace locflow::capture {

using detail::json;

namespace {

json key_json(const FourTuple& key) {
  return {{"src_ip", key.src_ip}, {"src_port", key.src_port}, {"dst_ip", key.dst_ip}, {"dst_port", key.dst_port}};
}

FourTuple key_from(const json& j) {
  FourTuple key;
  key.src_ip = j.at("src_ip").get<std::string>();
  key.src_port = j.at("src_port").get<std::uint16_t>();
  key.dst_ip = j.at("dst_ip").get<std::string>();
  key.dst_port = j.at("dst_port").get<std::uint16_t>();
  return key;
}

}  // namespace

void write_flow_records(std::ostream& out, const std::vector<HttpFlow>& flows) {
  for (const auto& flow : flows) {
    json packets = json::array();
    for (const auto& p : flow.packets) {
      packets.push_back(json::array({p.timestamp, p.direction == Direction::uplink ? "u" : "d", p.total_len,
                                     p.tcp_payload_len, p.has_http_layer ? 1 : 0}));
    }
    json requests = json::array();
    for (const auto& r : flow.requests) requests.push_back({{"method", r.method}, {"host", r.host}, {"path", r.path}});
    json record = {{"schema", schema::kFlowRecord}, {"id", flow.id()}, {"key", key_json(flow.key)},
                   {"packets", std::move(packets)}, {"requests", std::move(requests)}};
    record["instance_id"] = flow.source_instance_id ? json(*flow.source_instance_id) : json(nullptr);
    record["taint_location"] = flow.taint_location ? json(*flow.taint_location) : json(nullptr);
    out << record.dump() << '\n';
  }
}

std::string flow_records_text(const std::vector<HttpFlow>& flows) {
  std::ostringstream ss;
  write_flow_records(ss, flows);
  return ss.str();
}

std::vector<HttpFlow> read_flow_records(std::istream& in) {
  std::vector<HttpFlow> flows;
  detail::for_each_json_line(in, "flow record", [&](const json& j) {
    detail::require_schema(j, schema::kFlowRecord, "flow record");
    HttpFlow flow;
    flow.key = key_from(j.at("key"));
    for (const auto& p : j.at("packets")) {
      PacketMeta packet;
      packet.timestamp = p.at(0).get<double>();
      const auto dir = p.at(1).get<std::string>();
      if (dir != "u" && dir != "d") throw DataError("packet direction must be 'u' or 'd'");
      packet.direction = dir == "u" ? Direction::uplink : Direction::downlink;
      packet.total_len = p.at(2).get<std::uint32_t>();
      packet.tcp_payload_len = p.at(3).get<std::uint32_t>();
      packet.has_http_layer = p.at(4).get<int>() != 0;
      packet.four_tuple = packet.direction == Direction::uplink ? flow.key : flow.key.reversed();
      flow.packets.push_back(std::move(packet));
    }
    if (flow.packets.empty()) throw DataError("flow record without packets");
    for (const auto& r : j.at("requests")) {
      HttpRequest request{r.at("method").get<std::string>(), r.at("host").get<std::string>(),
                          r.at("path").get<std::string>(), {}};
      request.full_url = request.host + request.path;
      flow.requests.push_back(std::move(request));
    }
    if (j.contains("instance_id") && !j["instance_id"].is_null())
      flow.source_instance_id = j["instance_id"].get<std::string>();
    if (j.contains("taint_location") && !j["taint_location"].is_null())
      flow.taint_location = j["taint_location"].get<bool>();
    flows.push_back(std::move(flow));
  });
  return flows;
}

std::vector<FlowAnnotation> read_flow_annotations(std::istream& in) {
  std::vector<FlowAnnotation> out;
  detail::for_each_json_line(in, "flow annotation", [&](const json& j) {
    FlowAnnotation a;
    a.key = key_from(j);
    if (j.contains("t_start") && !j["t_start"].is_null()) a.t_start = j["t_start"].get<double>();
    if (j.contains("t_end") && !j["t_end"].is_null()) a.t_end = j["t_end"].get<double>();
    if (j.contains("instance_id") && !j["instance_id"].is_null()) a.instance_id = j["instance_id"].get<std::string>();
    if (j.contains("taint_location") && !j["taint_location"].is_null())
      a.taint_location = j["taint_location"].get<bool>();
    out.push_back(std::move(a));
  });
  return out;
}

void write_flow_annotations(std::ostream& out, const std::vector<FlowAnnotation>& annotations) {
  for (const auto& a : annotations) {
    json j = key_json(a.key);
    if (a.t_start) j["t_start"] = *a.t_start;
    if (a.t_end) j["t_end"] = *a.t_end;
    if (a.instance_id) j["instance_id"] = *a.instance_id;
    if (a.taint_location) j["taint_location"] = *a.taint_location;
    out << j.dump() << '\n';
  }
}

std::size_t apply_annotations(std::vector<HttpFlow>& flows, const std::vector<FlowAnnotation>& annotations) {
  std::map<FourTuple, std::vector<const FlowAnnotation*>> by_key;
  for (const auto& a : annotations) by_key[a.key].push_back(&a);

  std::size_t applied = 0;
  for (auto& flow : flows) {
    auto it = by_key.find(flow.key);
    if (it == by_key.end()) continue;
    const double t = flow.start_time();
    for (const auto* a : it->second) {
      if (a->t_start && t < *a->t_start) continue;
      if (a->t_end && t > *a->t_end) continue;
      if (a->instance_id) flow.source_instance_id = a->instance_id;
      if (a->taint_location) flow.taint_location = a->taint_location;
      ++applied;
      break;
    }
  }
  return applied;
}

}  // namespace locflow::capture
