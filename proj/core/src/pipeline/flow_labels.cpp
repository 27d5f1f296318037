#include "locflow/pipeline/flow_labels.hpp"

#include <map>
#include <set>

#include "../common/json_util.hpp"
#include "locflow/common/schema.hpp"

namespace locflow::pipeline {

using locflow::detail::json;

std::string_view to_string(FlowClass cls) {
  switch (cls) {
    case FlowClass::legal_loc:
      return "legal-loc";
    case FlowClass::illegal_loc:
      return "illegal-loc";
    case FlowClass::non_loc:
      return "non-loc";
  }
  return "non-loc";
}

FlowClass flow_class_from_string(std::string_view text) {
  if (text == "legal-loc") return FlowClass::legal_loc;
  if (text == "illegal-loc") return FlowClass::illegal_loc;
  if (text == "non-loc") return FlowClass::non_loc;
  throw DataError("unknown flow class '" + std::string(text) + "' (expected legal-loc, illegal-loc or non-loc)");
}

bool is_location_flow(const capture::HttpFlow& flow, const capture::CoordinateKeys& keys) {
  if (flow.taint_location.value_or(false)) return true;
  for (const auto& r : flow.requests) {
    if (capture::detect_coordinates(r.full_url, keys)) return true;
  }
  return false;
}

AutoLabelResult auto_label_flows(std::span<const capture::HttpFlow> flows, std::span<const InstanceLabel> instances,
                                 const HostnameList& hostlist, const capture::CoordinateKeys& keys) {
  std::map<std::string_view, InstanceVerdict> verdicts;
  for (const auto& i : instances) verdicts.emplace(i.instance_id, i.verdict);

  AutoLabelResult result;
  for (const auto& flow : flows) {
    const InstanceVerdict* verdict = nullptr;
    if (flow.source_instance_id) {
      const auto it = verdicts.find(*flow.source_instance_id);
      if (it != verdicts.end()) verdict = &it->second;
    }
    if (verdict && *verdict == InstanceVerdict::filtered) {
      ++result.dropped_filtered;
      continue;
    }
    if (!is_location_flow(flow, keys)) {
      result.labels.push_back({flow.id(), FlowClass::non_loc});
      continue;
    }
    if (!verdict) {
      ++result.dropped_unresolved;
      continue;
    }
    FlowClass cls = FlowClass::illegal_loc;
    if (*verdict == InstanceVerdict::expected) {
      bool listed = false;
      for (const auto& r : flow.requests) listed = listed || hostlist.matches(r.host);
      cls = listed ? FlowClass::illegal_loc : FlowClass::legal_loc;
    }
    result.labels.push_back({flow.id(), cls});
  }
  return result;
}

std::vector<FlowLabel> read_flow_labels(std::istream& in) {
  std::vector<FlowLabel> out;
  std::set<std::string> seen;
  locflow::detail::for_each_json_line(in, "flow label", [&](const json& j) {
    locflow::detail::require_schema(j, schema::kFlowLabel, "flow label");
    FlowLabel label{j.at("flow_id").get<std::string>(), flow_class_from_string(j.at("class").get<std::string>())};
    if (!seen.insert(label.flow_id).second) throw DataError("duplicate flow label " + label.flow_id);
    out.push_back(std::move(label));
  });
  return out;
}

void write_flow_labels(std::ostream& out, const std::vector<FlowLabel>& labels) {
  for (const auto& l : labels) {
    json j = {{"schema", schema::kFlowLabel}, {"flow_id", l.flow_id}, {"class", to_string(l.cls)}};
    out << j.dump() << '\n';
  }
}

}  // namespace locflow::pipeline
