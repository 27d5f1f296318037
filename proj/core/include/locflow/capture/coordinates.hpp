#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/capture/flow.hpp"

namespace locflow::capture {

struct CoordinateKeys {
  std::vector<std::string> latitude{"lat", "latitude", "tlat"};
  std::vector<std::string> longitude{"lng", "lon", "longitude", "tlon"};
  bool bare_number_fallback = true;
  int fallback_min_fraction_digits = 4;
};

/// Finds a plaintext latitude/longitude pair in a URL.
///
/// Named query keys (case-insensitive) are tried first: the first in-range
/// latitude value and the first in-range longitude value. Otherwise the first
/// two adjacent signed decimals with enough fraction digits, separated by a
/// non-alphanumeric run, are read as (lat, lon).
std::optional<Coordinates> detect_coordinates(std::string_view url, const CoordinateKeys& keys = {});

}  // namespace locflow::capture
