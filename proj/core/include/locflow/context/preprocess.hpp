#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace locflow::context {

/// Word tokens: runs of ASCII alphanumerics or non-ASCII bytes, lowercased.
std::vector<std::string> word_tokens(std::string_view text);

/// Tokenize, lowercase, drop stop words, Porter-stem. Tokens containing
/// digits or non-ASCII bytes are kept unstemmed, so pre-segmented text in
/// other scripts passes through the same pipeline without stemming.
std::vector<std::string> preprocess_text(std::string_view text, const std::set<std::string>& stop_words);

}  // namespace locflow::context
