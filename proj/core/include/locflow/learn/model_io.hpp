#pragma once

#include <string>
#include <string_view>

#include "locflow/learn/logistic.hpp"
#include "locflow/learn/naive_bayes.hpp"
#include "locflow/learn/ocsvm.hpp"
#include "locflow/learn/random_forest.hpp"

namespace locflow::learn {

/// JSON text for a single model, tagged with an algorithm id. Doubles are
/// written in shortest round-trip form so reloaded models predict
/// bit-identically.
std::string dump_model(const NaiveBayesModel& model);
std::string dump_model(const LogisticModel& model);
std::string dump_model(const RandomForestModel& model);
std::string dump_model(const OcsvmModel& model);

NaiveBayesModel load_naive_bayes(std::string_view text);
LogisticModel load_logistic(std::string_view text);
RandomForestModel load_random_forest(std::string_view text);
OcsvmModel load_ocsvm(std::string_view text);

}  // namespace locflow::learn
