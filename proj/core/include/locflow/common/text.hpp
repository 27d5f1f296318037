#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace locflow::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool starts_with_icase(std::string_view s, std::string_view prefix);
std::vector<std::string_view> split(std::string_view s, char sep);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

}  // namespace locflow::text
