#pragma once

#include <string>
#include <string_view>

namespace locflow::context {

/// Identifier recorded in topic configs; bump when stemming output changes.
inline constexpr std::string_view kStemmerVersion = "porter-1";

/// Martin Porter's 1980 suffix-stripping algorithm (reference C variant).
/// Input is expected to be lowercase ASCII letters; words of length <= 2 are
/// returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace locflow::context
