#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace locflow::context {

/// The <app, window> pair behind one running instance.
struct AppContext {
  std::string instance_id;
  std::string app_name;
  std::string description;
  std::string market_category;
  std::vector<std::string> ui_texts;
  std::vector<std::string> clickable_labels;

  friend bool operator==(const AppContext&, const AppContext&) = default;
};

/// Line-delimited context records. Throws DataError on duplicate instance ids
/// or an empty market category.
std::vector<AppContext> read_app_contexts(std::istream& in);
void write_app_contexts(std::ostream& out, const std::vector<AppContext>& contexts);

}  // namespace locflow::context
