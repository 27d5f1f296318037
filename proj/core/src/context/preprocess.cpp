#include "locflow/context/preprocess.hpp"

#include <cctype>

#include "locflow/context/porter_stemmer.hpp"

namespace locflow::context {

namespace {

bool token_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool stemmable(const std::string& token) {
  for (unsigned char c : token) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (token_byte(c)) {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> preprocess_text(std::string_view text, const std::set<std::string>& stop_words) {
  std::vector<std::string> out;
  for (auto& token : word_tokens(text)) {
    if (stop_words.count(token)) continue;
    out.push_back(stemmable(token) ? porter_stem(token) : std::move(token));
  }
  return out;
}

}  // namespace locflow::context
