#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace locflow::context {

/// Keyword configuration for the intention featurizer.
struct TopicConfig {
  std::string stemmer;                                   // must match kStemmerVersion
  std::map<std::string, std::set<std::string>> topics;   // topic -> pre-stemmed keywords
  std::set<std::string> city_names;                      // lowercase, trimmed
  std::vector<std::string> name_wordlist;                // lowercase
  std::set<std::string> stop_words;

  /// Throws DataError when a keyword set is empty, a topic name is blank, or
  /// the stemmer id does not match this build.
  void validate() const;
  std::string digest() const;
};

/// English stop words used when a config does not list its own.
const std::set<std::string>& default_stop_words();

TopicConfig parse_topic_config(std::string_view text);
TopicConfig load_topic_config(const std::filesystem::path& path);
std::string dump_topic_config(const TopicConfig& config);

}  // namespace locflow::context
