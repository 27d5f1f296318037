#include "locflow/context/topic_config.hpp"

#include "../common/json_util.hpp"
#include "locflow/common/atomic_file.hpp"
#include "locflow/common/digest.hpp"
#include "locflow/common/schema.hpp"
#include "locflow/common/text.hpp"
#include "locflow/context/porter_stemmer.hpp"

namespace locflow::context {

using detail::json;

const std::set<std::string>& default_stop_words() {
  static const std::set<std::string> words = {
      "i",       "me",      "my",      "myself",  "we",         "our",     "ours",    "ourselves", "you",
      "your",    "yours",   "yourself", "yourselves", "he",     "him",     "his",     "himself",   "she",
      "her",     "hers",    "herself", "it",      "its",        "itself",  "they",    "them",      "their",
      "theirs",  "themselves", "what", "which",   "who",        "whom",    "this",    "that",      "these",
      "those",   "am",      "is",      "are",     "was",        "were",    "be",      "been",      "being",
      "have",    "has",     "had",     "having",  "do",         "does",    "did",     "doing",     "a",
      "an",      "the",     "and",     "but",     "if",         "or",      "because", "as",        "until",
      "while",   "of",      "at",      "by",      "for",        "with",    "about",   "against",   "between",
      "into",    "through", "during",  "before",  "after",      "above",   "below",   "to",        "from",
      "up",      "down",    "in",      "out",     "on",         "off",     "over",    "under",     "again",
      "further", "then",    "once",    "here",    "there",      "when",    "where",   "why",       "how",
      "all",     "any",     "both",    "each",    "few",        "more",    "most",    "other",     "some",
      "such",    "no",      "nor",     "not",     "only",       "own",     "same",    "so",        "than",
      "too",     "very",    "s",       "t",       "can",        "will",    "just",    "don",       "should",
      "now",     "d",       "ll",      "m",       "o",          "re",      "ve",      "y",         "ain",
      "aren",    "couldn",  "didn",    "doesn",   "hadn",       "hasn",    "haven",   "isn",       "ma",
      "mightn",  "mustn",   "needn",   "shan",    "shouldn",    "wasn",    "weren",   "won",       "wouldn"};
  return words;
}

void TopicConfig::validate() const {
  if (stemmer != kStemmerVersion) {
    throw DataError("topic config: stemmer '" + stemmer + "' does not match this build (" +
                    std::string(kStemmerVersion) + ")");
  }
  if (topics.empty()) throw DataError("topic config: no topics");
  for (const auto& [name, keywords] : topics) {
    if (text::trim(name).empty()) throw DataError("topic config: blank topic name");
    if (keywords.empty()) throw DataError("topic config: topic '" + name + "' has no keywords");
  }
}

std::string TopicConfig::digest() const { return fnv1a_hex(dump_topic_config(*this)); }

TopicConfig parse_topic_config(std::string_view text) {
  const json j = detail::parse_document(text, "topic config");
  detail::require_schema(j, schema::kTopicConfig, "topic config");
  TopicConfig config;
  try {
    config.stemmer = j.value("stemmer", std::string(kStemmerVersion));
    for (const auto& [name, keywords] : j.at("topics").items()) {
      auto& set = config.topics[name];
      for (const auto& k : keywords) set.insert(text::to_lower(k.get<std::string>()));
    }
    for (const auto& c : j.value("city_names", json::array()))
      config.city_names.insert(text::to_lower(text::trim(c.get<std::string>())));
    for (const auto& w : j.value("name_wordlist", json::array()))
      config.name_wordlist.push_back(text::to_lower(w.get<std::string>()));
    if (j.contains("stop_words")) {
      for (const auto& s : j["stop_words"]) config.stop_words.insert(text::to_lower(s.get<std::string>()));
    } else {
      config.stop_words = default_stop_words();
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("topic config: ") + e.what());
  }
  config.validate();
  return config;
}

TopicConfig load_topic_config(const std::filesystem::path& path) { return parse_topic_config(read_file(path)); }

std::string dump_topic_config(const TopicConfig& config) {
  json topics = json::object();
  for (const auto& [name, keywords] : config.topics) topics[name] = keywords;
  json j = {{"schema", schema::kTopicConfig},
            {"stemmer", config.stemmer},
            {"topics", topics},
            {"city_names", config.city_names},
            {"name_wordlist", config.name_wordlist},
            {"stop_words", config.stop_words}};
  return j.dump(2) + "\n";
}

}  // namespace locflow::context
