#include "locflow/pipeline/instance_labels.hpp"

#include <set>

#include "../common/json_util.hpp"
#include "locflow/common/schema.hpp"

namespace locflow::pipeline {

using locflow::detail::json;

std::string_view to_string(InstanceVerdict verdict) {
  switch (verdict) {
    case InstanceVerdict::expected:
      return "expected";
    case InstanceVerdict::unexpected:
      return "unexpected";
    case InstanceVerdict::filtered:
      return "filtered";
  }
  return "filtered";
}

InstanceVerdict instance_verdict_from_string(std::string_view text) {
  if (text == "expected") return InstanceVerdict::expected;
  if (text == "unexpected") return InstanceVerdict::unexpected;
  if (text == "filtered") return InstanceVerdict::filtered;
  throw DataError("unknown instance verdict '" + std::string(text) + "'");
}

std::vector<InstanceLabel> read_instance_labels(std::istream& in) {
  std::vector<InstanceLabel> out;
  std::set<std::string> seen;
  locflow::detail::for_each_json_line(in, "instance label", [&](const json& j) {
    locflow::detail::require_schema(j, schema::kInstanceLabel, "instance label");
    InstanceLabel label;
    label.instance_id = j.at("instance_id").get<std::string>();
    label.verdict = instance_verdict_from_string(j.at("verdict").get<std::string>());
    if (!seen.insert(label.instance_id).second) throw DataError("duplicate instance label " + label.instance_id);
    out.push_back(std::move(label));
  });
  return out;
}

void write_instance_labels(std::ostream& out, const std::vector<InstanceLabel>& labels) {
  for (const auto& l : labels) {
    json j = {{"schema", schema::kInstanceLabel}, {"instance_id", l.instance_id}, {"verdict", to_string(l.verdict)}};
    out << j.dump() << '\n';
  }
}

}  // namespace locflow::pipeline
