#include "locflow/capture/coordinates.hpp"

#include <cctype>
#include <charconv>

#include "locflow/common/text.hpp"

namespace locflow::capture {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_key_char(char c) { return is_alnum(c) || c == '_'; }

bool in_lat_range(double v) { return v >= -90.0 && v <= 90.0; }
bool in_lon_range(double v) { return v >= -180.0 && v <= 180.0; }

// Parses [+-]digits[.digits] spanning all of `s`.
std::optional<double> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') ++i;
  std::size_t int_digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++int_digits;
  std::size_t frac_digits = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++frac_digits;
  }
  if (i != s.size() || int_digits + frac_digits == 0) return std::nullopt;
  std::string_view body = s[0] == '+' ? s.substr(1) : s;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size()) return std::nullopt;
  return value;
}

bool key_in(std::string_view key, const std::vector<std::string>& set) {
  for (const auto& k : set) {
    if (text::iequals(key, k)) return true;
  }
  return false;
}

std::optional<Coordinates> from_named_keys(std::string_view url, const CoordinateKeys& keys) {
  std::optional<double> lat, lon;
  for (std::size_t eq = url.find('='); eq != std::string_view::npos; eq = url.find('=', eq + 1)) {
    std::size_t key_start = eq;
    while (key_start > 0 && is_key_char(url[key_start - 1])) --key_start;
    const auto key = url.substr(key_start, eq - key_start);
    if (key.empty()) continue;
    std::size_t value_end = eq + 1;
    while (value_end < url.size() && url[value_end] != '&' && url[value_end] != ';' && url[value_end] != '#' &&
           url[value_end] != '/' && url[value_end] != '?')
      ++value_end;
    const auto value = parse_decimal(url.substr(eq + 1, value_end - eq - 1));
    if (!value) continue;
    if (!lat && key_in(key, keys.latitude) && in_lat_range(*value)) lat = value;
    if (!lon && key_in(key, keys.longitude) && in_lon_range(*value)) lon = value;
    if (lat && lon) return Coordinates{*lat, *lon};
  }
  return std::nullopt;
}

struct NumberSpan {
  std::size_t begin;  // first char including sign
  std::size_t end;
  int fraction_digits;
  double value;
};

// Standalone signed decimals: not glued to letters, digits or dots. A '-'
// directly after a digit is a separator, not a sign.
std::vector<NumberSpan> scan_numbers(std::string_view s) {
  std::vector<NumberSpan> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    if (begin > 0 && (s[begin - 1] == '-' || s[begin - 1] == '+') && (begin < 2 || !is_alnum(s[begin - 2])))
      --begin;
    const bool glued_left = begin > 0 && (is_alnum(s[begin - 1]) || s[begin - 1] == '.');
    std::size_t j = i;
    while (j < s.size() && is_digit(s[j])) ++j;
    int frac = 0;
    if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
      ++j;
      while (j < s.size() && is_digit(s[j])) ++j, ++frac;
    }
    const bool glued_right = j < s.size() && (is_alnum(s[j]) || s[j] == '.');
    if (!glued_left && !glued_right) {
      if (auto v = parse_decimal(s.substr(begin, j - begin))) out.push_back({begin, j, frac, *v});
    }
    i = j;
    while (i < s.size() && (is_alnum(s[i]) || s[i] == '.')) ++i;
  }
  return out;
}

std::optional<Coordinates> from_bare_numbers(std::string_view url, int min_fraction) {
  const auto numbers = scan_numbers(url);
  for (std::size_t k = 0; k + 1 < numbers.size(); ++k) {
    const auto& a = numbers[k];
    const auto& b = numbers[k + 1];
    if (a.fraction_digits < min_fraction || b.fraction_digits < min_fraction) continue;
    const auto gap = url.substr(a.end, b.begin - a.end);
    if (gap.empty()) continue;
    bool separator = true;
    for (char c : gap) separator = separator && !is_alnum(c);
    if (separator && in_lat_range(a.value) && in_lon_range(b.value)) return Coordinates{a.value, b.value};
  }
  return std::nullopt;
}

}  // namespace

std::optional<Coordinates> detect_coordinates(std::string_view url, const CoordinateKeys& keys) {
  if (auto named = from_named_keys(url, keys)) return named;
  if (keys.bare_number_fallback) return from_bare_numbers(url, keys.fallback_min_fraction_digits);
  return std::nullopt;
}

}  // namespace locflow::capture
