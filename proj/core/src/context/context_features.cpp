#include "locflow/context/context_features.hpp"

#include <cctype>
#include <unordered_set>

#include "locflow/common/text.hpp"
#include "locflow/context/preprocess.hpp"

namespace locflow::context {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Splits on delimiters, lower->Upper, ACRONYMWord and letter/digit boundaries.
std::vector<std::string> camel_parts(std::string_view name) {
  std::vector<std::string> parts;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) parts.push_back(text::to_lower(current));
    current.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const char prev = current.back();
      const bool next_lower = i + 1 < name.size() && is_lower(name[i + 1]);
      if ((is_lower(prev) && is_upper(c)) || (is_upper(prev) && is_upper(c) && next_lower) ||
          (is_digit(prev) != is_digit(c)))
        flush();
    }
    current.push_back(c);
  }
  flush();
  return parts;
}

}  // namespace

std::string assign_topic(std::span<const std::string> tokens, const TopicConfig& config,
                         std::string_view fallback_category) {
  const std::set<std::string> distinct(tokens.begin(), tokens.end());
  const std::string* best = nullptr;
  std::size_t best_hits = 0;
  for (const auto& [name, keywords] : config.topics) {  // ascending names
    std::size_t hits = 0;
    for (const auto& k : keywords) hits += distinct.count(k);
    if (hits > best_hits) {
      best_hits = hits;
      best = &name;
    }
  }
  if (best) return *best;
  return "market:" + text::to_lower(text::trim(fallback_category));
}

SparseFeatureVector name_features(std::string_view app_name, std::span<const std::string> wordlist) {
  const std::unordered_set<std::string> words(wordlist.begin(), wordlist.end());
  std::size_t longest = 0;
  for (const auto& w : wordlist) longest = std::max(longest, w.size());

  SparseFeatureVector v;
  for (const auto& part : camel_parts(app_name)) {
    if (words.count(part)) v.set_flag("name:" + part);
    std::size_t pos = 0;
    while (pos < part.size()) {
      std::size_t matched = 0;
      for (std::size_t len = std::min(longest, part.size() - pos); len >= 2; --len) {
        if (words.count(part.substr(pos, len))) {
          matched = len;
          break;
        }
      }
      if (matched) {
        v.set_flag("name:" + part.substr(pos, matched));
        pos += matched;
      } else {
        ++pos;
      }
    }
  }
  return v;
}

SparseFeatureVector ui_features(const AppContext& context, const TopicConfig& config) {
  SparseFeatureVector v;
  for (const auto& text : context.ui_texts) {
    for (const auto& token : preprocess_text(text, config.stop_words)) v.set_flag("ui:" + token);
  }
  for (const auto& label : context.clickable_labels) {
    if (config.city_names.count(text::to_lower(text::trim(label)))) {
      v.set_flag(kCityClickable);
      break;
    }
  }
  return v;
}

SparseFeatureVector context_vector(const AppContext& context, const TopicConfig& config) {
  const auto tokens = preprocess_text(context.description, config.stop_words);
  SparseFeatureVector v;
  v.set_flag("topic:" + assign_topic(tokens, config, context.market_category));
  v.merge(name_features(context.app_name, config.name_wordlist));
  v.merge(ui_features(context, config));
  return v;
}

}  // namespace locflow::context
