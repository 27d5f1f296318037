#include "locflow/context/app_context.hpp"

#include <set>

#include "../common/json_util.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/common/text.hpp"

namespace locflow::context {

using detail::json;

std::vector<AppContext> read_app_contexts(std::istream& in) {
  std::vector<AppContext> out;
  std::set<std::string> seen;
  detail::for_each_json_line(in, "app context", [&](const json& j) {
    detail::require_schema(j, schema::kAppContext, "app context");
    AppContext c;
    c.instance_id = j.at("instance_id").get<std::string>();
    c.app_name = j.value("app_name", "");
    c.description = j.value("description", "");
    c.market_category = j.at("market_category").get<std::string>();
    c.ui_texts = j.value("ui_texts", std::vector<std::string>{});
    c.clickable_labels = j.value("clickable_labels", std::vector<std::string>{});
    if (text::trim(c.market_category).empty())
      throw DataError("instance " + c.instance_id + " has an empty market category");
    if (!seen.insert(c.instance_id).second) throw DataError("duplicate instance id " + c.instance_id);
    out.push_back(std::move(c));
  });
  return out;
}

void write_app_contexts(std::ostream& out, const std::vector<AppContext>& contexts) {
  for (const auto& c : contexts) {
    json j = {{"schema", schema::kAppContext},     {"instance_id", c.instance_id},
              {"app_name", c.app_name},            {"description", c.description},
              {"market_category", c.market_category}, {"ui_texts", c.ui_texts},
              {"clickable_labels", c.clickable_labels}};
    out << j.dump() << '\n';
  }
}

}  // namespace locflow::context
