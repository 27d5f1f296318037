#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/capture/coordinates.hpp"
#include "locflow/capture/flow.hpp"
#include "locflow/pipeline/hostname_list.hpp"
#include "locflow/pipeline/instance_labels.hpp"

namespace locflow::pipeline {

enum class FlowClass { legal_loc, illegal_loc, non_loc };

/// Label space of the supervised flow model, in tie-break order.
inline const std::vector<std::string> kFlowLabelSpace{"legal-loc", "illegal-loc", "non-loc"};

std::string_view to_string(FlowClass cls);
FlowClass flow_class_from_string(std::string_view text);

struct FlowLabel {
  std::string flow_id;
  FlowClass cls = FlowClass::non_loc;

  friend bool operator==(const FlowLabel&, const FlowLabel&) = default;
};

/// True when the taint annotation says so or any request URL carries a
/// coordinate pair.
bool is_location_flow(const capture::HttpFlow& flow, const capture::CoordinateKeys& keys = {});

struct AutoLabelResult {
  std::vector<FlowLabel> labels;       // input order, retained flows only
  std::size_t dropped_filtered = 0;    // flows of filtered instances
  std::size_t dropped_unresolved = 0;  // location flows with no known instance
};

AutoLabelResult auto_label_flows(std::span<const capture::HttpFlow> flows, std::span<const InstanceLabel> instances,
                                 const HostnameList& hostlist, const capture::CoordinateKeys& keys = {});

/// JSON lines; the same format carries ground-truth sidecars.
std::vector<FlowLabel> read_flow_labels(std::istream& in);
void write_flow_labels(std::ostream& out, const std::vector<FlowLabel>& labels);

}  // namespace locflow::pipeline
