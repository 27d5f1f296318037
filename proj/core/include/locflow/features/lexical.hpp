#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "locflow/capture/flow.hpp"
#include "locflow/common/sparse_vector.hpp"

namespace locflow::features {

/// Lowercases and splits on every non-alphanumeric byte; empty tokens dropped.
std::vector<std::string> tokenize_url(std::string_view url);

/// host:<tok> and path:<tok> flags plus len_host, len_url and num_dots.
SparseFeatureVector lexical_features(const capture::HttpRequest& request);

/// Union of token flags over all requests; numeric features from the first.
SparseFeatureVector flow_lexical_features(const capture::HttpFlow& flow);

}  // namespace locflow::features
