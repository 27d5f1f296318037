#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locflow/common/sparse_vector.hpp"
#include "locflow/context/app_context.hpp"
#include "locflow/context/topic_config.hpp"

namespace locflow::context {

/// Topic whose keyword set shares the most distinct tokens with `tokens`.
/// Ties go to the lexicographically smallest topic; no hits yields
/// "market:<fallback_category>".
std::string assign_topic(std::span<const std::string> tokens, const TopicConfig& config,
                         std::string_view fallback_category);

/// name:<w> flags for wordlist words found in an app name, via camel-case and
/// delimiter splitting plus greedy longest-match segmentation of each run.
SparseFeatureVector name_features(std::string_view app_name, std::span<const std::string> wordlist);

/// ui:<token> flags over the window text plus "city-clickable".
SparseFeatureVector ui_features(const AppContext& context, const TopicConfig& config);

/// topic:<name> one-hot, name features and UI features combined.
SparseFeatureVector context_vector(const AppContext& context, const TopicConfig& config);

inline constexpr std::string_view kCityClickable = "city-clickable";

}  // namespace locflow::context
