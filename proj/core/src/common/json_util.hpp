#pragma once

// Internal helpers shared by the core's serializers. Not installed.

#include <functional>
#include <istream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "locflow/common/errors.hpp"

namespace locflow::detail {

using json = nlohmann::json;

inline void require_schema(const json& j, std::string_view expected, std::string_view what) {
  if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string()) {
    throw SchemaError(std::string(what) + ": missing schema field (expected " + std::string(expected) + ")");
  }
  const auto found = j["schema"].get<std::string>();
  if (found != expected) {
    throw SchemaError(std::string(what) + ": schema mismatch, found " + found + ", expected " + std::string(expected));
  }
}

/// Calls `fn` for every non-blank line parsed as JSON. Parse and field errors
/// become DataError tagged with the line number; SchemaError passes through.
inline void for_each_json_line(std::istream& in, std::string_view what, const std::function<void(const json&)>& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError(std::string(what) + " line " + std::to_string(number) + ": " + e.what());
    }
  }
}

/// Parses a whole document, mapping parse errors to SchemaError (a corrupt
/// artifact is a schema problem for the caller).
inline json parse_document(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": not valid JSON: " + e.what());
  }
}

}  // namespace locflow::detail
