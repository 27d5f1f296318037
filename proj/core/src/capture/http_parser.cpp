#include "locflow/capture/http_parser.hpp"

#include "locflow/common/text.hpp"

namespace locflow::capture {

bool starts_with_method(std::string_view payload);

namespace {

std::string_view next_line(std::string_view text, std::size_t& pos) {
  const auto end = text.find('\n', pos);
  std::string_view line = end == std::string_view::npos ? text.substr(pos) : text.substr(pos, end - pos);
  pos = end == std::string_view::npos ? text.size() : end + 1;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Splits "http://host[:port]/path" into host and path. Returns false for
// origin-form targets.
bool split_absolute(std::string_view target, std::string& host, std::string& path) {
  const auto scheme = target.find("://");
  if (scheme == std::string_view::npos || target.find('/') < scheme) return false;
  auto rest = target.substr(scheme + 3);
  const auto slash = rest.find_first_of("/?");
  host = text::to_lower(rest.substr(0, slash));
  if (slash == std::string_view::npos) {
    path = "/";
  } else {
    path = std::string(rest.substr(slash));
    if (path.front() == '?') path.insert(path.begin(), '/');
  }
  return true;
}

}  // namespace

bool parse_request(std::string_view text, std::string_view fallback_host, HttpRequest& out) {
  if (!starts_with_method(text)) return false;
  std::size_t pos = 0;
  const auto request_line = next_line(text, pos);

  const auto sp1 = request_line.find(' ');
  auto remainder = text::trim(request_line.substr(sp1 + 1));
  const auto sp2 = remainder.rfind(' ');
  std::string_view target = remainder;
  if (sp2 != std::string_view::npos && remainder.substr(sp2 + 1).starts_with("HTTP/")) {
    target = text::trim(remainder.substr(0, sp2));
  }
  if (target.empty()) return false;

  out = HttpRequest{};
  out.method = std::string(request_line.substr(0, sp1));

  std::string absolute_host;
  if (!split_absolute(target, absolute_host, out.path)) {
    out.path = (out.method == "CONNECT" || target == "*") ? std::string() : std::string(target);
  }

  while (pos < text.size()) {
    const auto line = next_line(text, pos);
    if (line.empty()) break;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    if (text::iequals(text::trim(line.substr(0, colon)), "host")) {
      out.host = text::to_lower(text::trim(line.substr(colon + 1)));
      break;
    }
  }
  if (out.host.empty()) out.host = absolute_host;
  if (out.host.empty() && out.method == "CONNECT") out.host = text::to_lower(target);
  if (out.host.empty()) out.host = std::string(fallback_host);
  out.full_url = out.host + out.path;
  return true;
}

std::vector<HttpRequest> parse_http(const HttpFlow& flow) {
  std::vector<std::string> buffers;
  bool open = false;
  for (const auto& packet : flow.packets) {
    if (packet.direction != Direction::uplink || packet.payload.empty()) continue;
    if (starts_with_method(packet.payload)) {
      buffers.push_back(packet.payload);
      open = true;
    } else if (open) {
      buffers.back() += packet.payload;
    }
  }

  std::vector<HttpRequest> requests;
  for (const auto& buffer : buffers) {
    HttpRequest request;
    if (parse_request(buffer, flow.key.dst_ip, request)) requests.push_back(std::move(request));
  }
  return requests;
}

void attach_requests(std::vector<HttpFlow>& flows) {
  for (auto& flow : flows) flow.requests = parse_http(flow);
}

}  // namespace locflow::capture
