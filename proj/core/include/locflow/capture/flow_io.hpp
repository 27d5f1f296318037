#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "locflow/capture/flow.hpp"

namespace locflow::capture {

/// Writes one JSON object per flow with a versioned "schema" field.
/// Payload bytes are not serialized; extracted requests are.
void write_flow_records(std::ostream& out, const std::vector<HttpFlow>& flows);
std::string flow_records_text(const std::vector<HttpFlow>& flows);

/// Reads flow records; throws SchemaError on a schema mismatch and DataError on
/// malformed lines.
std::vector<HttpFlow> read_flow_records(std::istream& in);

/// Sidecar record associating a connection with a running instance.
struct FlowAnnotation {
  FourTuple key;  // uplink orientation
  std::optional<double> t_start;
  std::optional<double> t_end;
  std::optional<std::string> instance_id;
  std::optional<bool> taint_location;
};

std::vector<FlowAnnotation> read_flow_annotations(std::istream& in);
void write_flow_annotations(std::ostream& out, const std::vector<FlowAnnotation>& annotations);

/// Applies the first matching annotation to each flow. A record matches when
/// keys are equal and the flow's first packet falls in [t_start, t_end].
/// Returns the number of flows annotated.
std::size_t apply_annotations(std::vector<HttpFlow>& flows, const std::vector<FlowAnnotation>& annotations);

}  // namespace locflow::capture
