#pragma once

// Internal JSON mapping for trained models, shared with the bundle writer.

#include "../common/json_util.hpp"
#include "locflow/learn/logistic.hpp"
#include "locflow/learn/naive_bayes.hpp"
#include "locflow/learn/ocsvm.hpp"
#include "locflow/learn/random_forest.hpp"

namespace locflow::learn::detail {

using locflow::detail::json;

json to_json(const NaiveBayesModel& m);
json to_json(const LogisticModel& m);
json to_json(const RandomForestModel& m);
json to_json(const OcsvmModel& m);

NaiveBayesModel naive_bayes_from_json(const json& j);
LogisticModel logistic_from_json(const json& j);
RandomForestModel random_forest_from_json(const json& j);
OcsvmModel ocsvm_from_json(const json& j);

}  // namespace locflow::learn::detail
