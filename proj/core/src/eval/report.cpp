#include "locflow/eval/report.hpp"

#include <cstdio>
#include <sstream>

#include "../common/json_util.hpp"
#include "locflow/common/schema.hpp"

namespace locflow::eval {

using locflow::detail::json;

Evaluation summarize(std::string name, std::string description, const ConfusionMatrix& cm) {
  Evaluation e;
  e.name = std::move(name);
  e.description = std::move(description);
  e.confusion = cm;
  e.accuracy = accuracy(cm);
  const double total = static_cast<double>(cm.total());
  const double classes = static_cast<double>(cm.size());
  for (std::size_t c = 0; c < cm.size(); ++c) {
    ClassMetrics m{cm.label_space()[c], cm.actual_total(c), metrics(cm, c)};
    const double w = total > 0 ? static_cast<double>(m.support) / total : 0.0;
    e.weighted.tp_rate += w * m.metrics.tp_rate;
    e.weighted.fp_rate += w * m.metrics.fp_rate;
    e.weighted.precision += w * m.metrics.precision;
    e.weighted.f_measure += w * m.metrics.f_measure;
    e.macro.tp_rate += m.metrics.tp_rate / classes;
    e.macro.fp_rate += m.metrics.fp_rate / classes;
    e.macro.precision += m.metrics.precision / classes;
    e.macro.f_measure += m.metrics.f_measure / classes;
    e.per_class.push_back(std::move(m));
  }
  return e;
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string metric_row(const std::string& label, const std::string& support, const Metrics& m) {
  return pad(label, 14) + pad(support, 9) + pad(fixed(m.tp_rate), 9) + pad(fixed(m.fp_rate), 9) +
         pad(fixed(m.precision), 11) + fixed(m.f_measure) + (m.degenerate() ? "  (degenerate)" : "") + "\n";
}

json metrics_json(const Metrics& m) {
  json j = {{"tp_rate", m.tp_rate}, {"fp_rate", m.fp_rate}, {"precision", m.precision}, {"f_measure", m.f_measure}};
  json flags = json::array();
  if (m.tp_rate_degenerate) flags.push_back("tp_rate");
  if (m.fp_rate_degenerate) flags.push_back("fp_rate");
  if (m.precision_degenerate) flags.push_back("precision");
  if (m.f_measure_degenerate) flags.push_back("f_measure");
  j["degenerate"] = std::move(flags);
  return j;
}

}  // namespace

std::string render_text(const EvalReport& report) {
  std::ostringstream out;
  out << "locflow evaluation report (" << schema::kReport << ")\n";
  out << "seed " << report.seed << ", folds " << report.folds << "\n";
  for (const auto& [key, value] : report.notes) out << key << ": " << value << "\n";

  for (const auto& e : report.evaluations) {
    out << "\n== " << e.name << " ==\n";
    if (!e.description.empty()) out << e.description << "\n";
    out << pad("class", 14) << pad("support", 9) << pad("TPR", 9) << pad("FPR", 9) << pad("precision", 11)
        << "F-measure\n";
    for (const auto& c : e.per_class) out << metric_row(c.label, std::to_string(c.support), c.metrics);
    out << metric_row("weighted", std::to_string(e.confusion.total()), e.weighted);
    out << metric_row("macro", "", e.macro);
    out << "accuracy " << fixed(e.accuracy) << "\n";
    out << "confusion (rows actual, columns predicted):\n" << pad("", 14);
    for (const auto& l : e.confusion.label_space()) out << pad(l, 13);
    out << "\n";
    for (std::size_t a = 0; a < e.confusion.size(); ++a) {
      out << pad(e.confusion.label_space()[a], 14);
      for (std::size_t p = 0; p < e.confusion.size(); ++p) out << pad(std::to_string(e.confusion.count(a, p)), 13);
      out << "\n";
    }
  }

  if (!report.ranking.empty()) {
    out << "\n== information gain ==\n";
    for (const auto& g : report.ranking) out << pad(fixed(g.gain), 9) << g.feature << "\n";
  }
  return out.str();
}

std::string render_json(const EvalReport& report) {
  json j = {{"schema", schema::kReport}, {"seed", report.seed}, {"folds", report.folds}};
  json notes = json::object();
  for (const auto& [key, value] : report.notes) notes[key] = value;
  j["notes"] = std::move(notes);
  json evaluations = json::array();
  for (const auto& e : report.evaluations) {
    json per_class = json::array();
    for (const auto& c : e.per_class) {
      json m = metrics_json(c.metrics);
      m["label"] = c.label;
      m["support"] = c.support;
      per_class.push_back(std::move(m));
    }
    json matrix = json::array();
    for (std::size_t a = 0; a < e.confusion.size(); ++a) {
      json row = json::array();
      for (std::size_t p = 0; p < e.confusion.size(); ++p) row.push_back(e.confusion.count(a, p));
      matrix.push_back(std::move(row));
    }
    evaluations.push_back({{"name", e.name},
                           {"description", e.description},
                           {"label_space", e.confusion.label_space()},
                           {"confusion", std::move(matrix)},
                           {"per_class", std::move(per_class)},
                           {"weighted", metrics_json(e.weighted)},
                           {"macro", metrics_json(e.macro)},
                           {"accuracy", e.accuracy}});
  }
  j["evaluations"] = std::move(evaluations);
  json ranking = json::array();
  for (const auto& g : report.ranking)
    ranking.push_back({{"feature", g.feature}, {"gain", g.gain}, {"threshold", g.threshold}});
  j["information_gain"] = std::move(ranking);
  return j.dump(2) + "\n";
}

}  // namespace locflow::eval
