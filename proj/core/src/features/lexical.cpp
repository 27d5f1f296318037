#include "locflow/features/lexical.hpp"

#include <algorithm>
#include <cctype>

namespace locflow::features {

std::vector<std::string> tokenize_url(std::string_view url) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : url) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

void add_tokens(SparseFeatureVector& v, std::string_view prefix, std::string_view text) {
  for (const auto& tok : tokenize_url(text)) v.set_flag(std::string(prefix) + tok);
}

void add_numeric(SparseFeatureVector& v, const capture::HttpRequest& r) {
  v.set("len_host", static_cast<double>(r.host.size()));
  v.set("len_url", static_cast<double>(r.full_url.size()));
  v.set("num_dots", static_cast<double>(std::count(r.full_url.begin(), r.full_url.end(), '.')));
}

}  // namespace

SparseFeatureVector lexical_features(const capture::HttpRequest& request) {
  SparseFeatureVector v;
  add_tokens(v, "host:", request.host);
  add_tokens(v, "path:", request.path);
  add_numeric(v, request);
  return v;
}

SparseFeatureVector flow_lexical_features(const capture::HttpFlow& flow) {
  SparseFeatureVector v;
  for (const auto& r : flow.requests) {
    add_tokens(v, "host:", r.host);
    add_tokens(v, "path:", r.path);
  }
  if (!flow.requests.empty()) add_numeric(v, flow.requests.front());
  return v;
}

}  // namespace locflow::features
