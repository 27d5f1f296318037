#include "locflow/eval/cdf.hpp"

#include <algorithm>

#include "locflow/common/errors.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/common/text.hpp"

namespace locflow::eval {

std::vector<ClassCdf> cdf_export(std::span<const features::StatVector> rows, std::span<const std::string> labels,
                                 std::span<const std::string> label_space, std::string_view selector) {
  const auto field = features::StatVector::index_of(selector);
  if (!field) {
    std::string valid;
    for (auto n : features::StatVector::names()) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw DataError("unknown CDF selector '" + std::string(selector) + "'; valid fields: " + valid);
  }
  if (rows.size() != labels.size()) throw DataError("cdf_export: rows and labels differ in length");

  std::vector<std::vector<double>> values(label_space.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto it = std::find(label_space.begin(), label_space.end(), labels[i]);
    if (it == label_space.end()) throw DataError("cdf_export: label '" + labels[i] + "' outside the label space");
    values[static_cast<std::size_t>(it - label_space.begin())].push_back(rows[i][*field]);
  }

  std::vector<ClassCdf> out;
  for (std::size_t c = 0; c < label_space.size(); ++c) {
    auto& v = values[c];
    std::sort(v.begin(), v.end());
    ClassCdf cdf{label_space[c], v.size(), {}};
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i + 1 < v.size() && v[i + 1] == v[i]) continue;  // collapse duplicates to their last rank
      const double fraction = i + 1 == v.size() ? 1.0 : static_cast<double>(i + 1) / static_cast<double>(v.size());
      cdf.points.push_back({v[i], fraction});
    }
    out.push_back(std::move(cdf));
  }
  return out;
}

void write_cdf_table(std::ostream& out, std::string_view selector, const std::vector<ClassCdf>& cdfs) {
  out << "#schema\t" << schema::kCdf << "\t" << selector << "\n";
  out << "class\tvalue\tcdf\n";
  for (const auto& c : cdfs) {
    if (c.points.empty()) {
      out << "#empty\t" << c.label << "\n";
      continue;
    }
    for (const auto& p : c.points) out << c.label << '\t' << text::format_double(p.value) << '\t' << text::format_double(p.fraction) << '\n';
  }
}

}  // namespace locflow::eval
