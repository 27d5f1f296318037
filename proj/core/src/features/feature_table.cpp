#include "locflow/features/feature_table.hpp"

#include <charconv>
#include <string>

#include "locflow/common/errors.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/common/text.hpp"
#include "locflow/features/lexical.hpp"

namespace locflow::features {

namespace {

double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("feature table line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_feature_table(std::ostream& out, const std::vector<capture::HttpFlow>& flows) {
  out << "#schema\t" << schema::kFeatureTable << '\n';
  out << "flow_id";
  for (auto name : StatVector::names()) out << '\t' << name;
  out << "\tlexical\n";
  for (const auto& flow : flows) {
    out << flow.id();
    const auto stats = stat_features(flow);
    for (double v : stats.values()) out << '\t' << text::format_double(v);
    out << '\t';
    bool first = true;
    for (const auto& [name, value] : flow_lexical_features(flow)) {
      if (!first) out << ' ';
      first = false;
      out << name << ':' << text::format_double(value);
    }
    out << '\n';
  }
}

std::vector<FeatureRow> read_feature_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("feature table: empty input");
  const auto head = text::split(line, '\t');
  if (head.size() != 2 || head[0] != "#schema") throw SchemaError("feature table: missing schema row");
  if (head[1] != schema::kFeatureTable)
    throw SchemaError("feature table: schema mismatch, found " + std::string(head[1]));
  if (!std::getline(in, line)) throw DataError("feature table: missing header");
  if (text::split(line, '\t').size() != kStatFeatureCount + 2) throw SchemaError("feature table: unexpected header");

  std::vector<FeatureRow> rows;
  std::size_t number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != kStatFeatureCount + 2)
      throw DataError("feature table line " + std::to_string(number) + ": wrong column count");
    FeatureRow row;
    row.flow_id = std::string(cols[0]);
    StatVector::Values values{};
    for (std::size_t i = 0; i < kStatFeatureCount; ++i) values[i] = parse_number(cols[i + 1], number);
    row.stats = StatVector(values);
    if (!cols.back().empty()) {
      for (auto item : text::split(cols.back(), ' ')) {
        const auto colon = item.rfind(':');
        if (colon == std::string_view::npos || colon == 0)
          throw DataError("feature table line " + std::to_string(number) + ": bad lexical entry");
        row.lexical.set(item.substr(0, colon), parse_number(item.substr(colon + 1), number));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace locflow::features
