#pragma once

#include <string_view>
#include <vector>

#include "locflow/capture/flow.hpp"

namespace locflow::capture {

/// Extracts HTTP requests from the flow's uplink payloads.
///
/// An uplink packet whose payload starts with a method token opens a request;
/// following uplink packets that do not are appended to it. Host comes from
/// the Host header (lowercased, port kept), falling back to an absolute-form
/// target and then to the server IP.
std::vector<HttpRequest> parse_http(const HttpFlow& flow);

/// Parses a single request head. Returns false when `text` is not HTTP.
bool parse_request(std::string_view text, std::string_view fallback_host, HttpRequest& out);

/// Runs parse_http over every flow and stores the result in `requests`.
void attach_requests(std::vector<HttpFlow>& flows);

}  // namespace locflow::capture
