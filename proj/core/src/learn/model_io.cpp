#include "locflow/learn/model_io.hpp"

#include <cmath>

#include "model_json.hpp"

namespace locflow::learn {

namespace detail {

namespace {

void check_algorithm(const json& j, std::string_view algorithm) {
  if (!j.is_object() || j.value("algorithm", "") != algorithm) {
    throw SchemaError("model: expected algorithm '" + std::string(algorithm) + "', found '" +
                      (j.is_object() ? j.value("algorithm", "") : std::string("?")) + "'");
  }
}

// Throws if a double is not finite; JSON cannot carry NaN or infinity.
const std::vector<double>& finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw TrainingError(std::string("model: non-finite value in ") + what);
  }
  return v;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  } catch (const DataError& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

const char* bootstrap_name(BootstrapMode m) {
  switch (m) {
    case BootstrapMode::sample:
      return "sample";
    case BootstrapMode::none:
      return "none";
    case BootstrapMode::row_hash:
      return "row_hash";
  }
  return "sample";
}

BootstrapMode bootstrap_from(const std::string& s) {
  if (s == "sample") return BootstrapMode::sample;
  if (s == "none") return BootstrapMode::none;
  if (s == "row_hash") return BootstrapMode::row_hash;
  throw SchemaError("model: unknown bootstrap mode '" + s + "'");
}

}  // namespace

json to_json(const NaiveBayesModel& m) {
  return {{"algorithm", "bernoulli-naive-bayes"},
          {"vocabulary", m.vocabulary.names()},
          {"label_space", m.label_space},
          {"smoothing", m.smoothing},
          {"log_prior", finite(m.log_prior, "log_prior")},
          {"log_present", finite(m.log_present, "log_present")},
          {"log_absent", finite(m.log_absent, "log_absent")}};
}

NaiveBayesModel naive_bayes_from_json(const json& j) {
  check_algorithm(j, "bernoulli-naive-bayes");
  return guarded("naive Bayes model", [&] {
    NaiveBayesModel m;
    m.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    m.label_space = j.at("label_space").get<std::vector<std::string>>();
    m.smoothing = j.at("smoothing").get<double>();
    m.log_prior = j.at("log_prior").get<std::vector<double>>();
    m.log_present = j.at("log_present").get<std::vector<double>>();
    m.log_absent = j.at("log_absent").get<std::vector<double>>();
    const auto cells = m.label_space.size() * m.vocabulary.size();
    if (m.log_prior.size() != m.label_space.size() || m.log_present.size() != cells || m.log_absent.size() != cells)
      throw SchemaError("naive Bayes model: parameter shapes do not match vocabulary");
    return m;
  });
}

json to_json(const LogisticModel& m) {
  return {{"algorithm", "one-vs-rest-logistic"},
          {"vocabulary", m.vocabulary.names()},
          {"label_space", m.label_space},
          {"learning_rate", m.config.learning_rate},
          {"epochs", m.config.epochs},
          {"l2", m.config.l2},
          {"weights", finite(m.weights, "weights")},
          {"bias", finite(m.bias, "bias")}};
}

LogisticModel logistic_from_json(const json& j) {
  check_algorithm(j, "one-vs-rest-logistic");
  return guarded("logistic model", [&] {
    LogisticModel m;
    m.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    m.label_space = j.at("label_space").get<std::vector<std::string>>();
    m.config.learning_rate = j.at("learning_rate").get<double>();
    m.config.epochs = j.at("epochs").get<int>();
    m.config.l2 = j.at("l2").get<double>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<std::vector<double>>();
    if (m.bias.size() != m.label_space.size() || m.weights.size() != m.label_space.size() * m.vocabulary.size())
      throw SchemaError("logistic model: parameter shapes do not match vocabulary");
    return m;
  });
}

json to_json(const RandomForestModel& m) {
  json trees = json::array();
  for (const auto& tree : m.trees) {
    json nodes = json::array();
    for (const auto& node : tree.nodes) {
      if (node.feature < 0) {
        nodes.push_back(json::array({-1, node.histogram}));
      } else {
        nodes.push_back(json::array({node.feature, node.threshold, node.left, node.right}));
      }
    }
    trees.push_back({{"seed", tree.seed}, {"nodes", std::move(nodes)}});
  }
  return {{"algorithm", "random-forest"},
          {"vocabulary", m.vocabulary.names()},
          {"label_space", m.label_space},
          {"n_trees", m.config.n_trees},
          {"max_depth", m.config.max_depth},
          {"min_leaf", m.config.min_leaf},
          {"max_features", m.config.max_features},
          {"seed", m.config.seed},
          {"bootstrap", bootstrap_name(m.config.bootstrap)},
          {"oob_accuracy", m.oob_accuracy},
          {"trees", std::move(trees)}};
}

RandomForestModel random_forest_from_json(const json& j) {
  check_algorithm(j, "random-forest");
  return guarded("random forest model", [&] {
    RandomForestModel m;
    m.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    m.label_space = j.at("label_space").get<std::vector<std::string>>();
    m.config.n_trees = j.at("n_trees").get<int>();
    m.config.max_depth = j.at("max_depth").get<int>();
    m.config.min_leaf = j.at("min_leaf").get<int>();
    m.config.max_features = j.at("max_features").get<int>();
    m.config.seed = j.at("seed").get<std::uint64_t>();
    m.config.bootstrap = bootstrap_from(j.at("bootstrap").get<std::string>());
    m.oob_accuracy = j.at("oob_accuracy").get<double>();
    const auto d = static_cast<int>(m.vocabulary.size());
    for (const auto& t : j.at("trees")) {
      DecisionTree tree;
      tree.seed = t.at("seed").get<std::uint64_t>();
      const auto& nodes = t.at("nodes");
      const int count = static_cast<int>(nodes.size());
      for (const auto& n : nodes) {
        TreeNode node;
        node.feature = n.at(0).get<int>();
        if (node.feature < 0) {
          node.histogram = n.at(1).get<std::vector<double>>();
          if (node.histogram.size() != m.label_space.size()) throw SchemaError("random forest model: bad leaf");
        } else {
          node.threshold = n.at(1).get<double>();
          node.left = n.at(2).get<int>();
          node.right = n.at(3).get<int>();
          if (node.feature >= d || node.left <= 0 || node.right <= 0 || node.left >= count || node.right >= count)
            throw SchemaError("random forest model: node index out of range");
        }
        tree.nodes.push_back(std::move(node));
      }
      if (tree.nodes.empty()) throw SchemaError("random forest model: empty tree");
      m.trees.push_back(std::move(tree));
    }
    return m;
  });
}

json to_json(const OcsvmModel& m) {
  return {{"algorithm", "one-class-svm-rbf"},
          {"vocabulary", m.vocabulary.names()},
          {"scale_lower", finite(m.scaler.lower, "scale_lower")},
          {"scale_upper", finite(m.scaler.upper, "scale_upper")},
          {"nu", m.nu},
          {"gamma", m.gamma},
          {"rho", m.rho},
          {"duality_gap", m.duality_gap},
          {"iterations", m.iterations},
          {"coefficients", finite(m.coefficients, "coefficients")},
          {"support_vectors", m.support_vectors}};
}

OcsvmModel ocsvm_from_json(const json& j) {
  check_algorithm(j, "one-class-svm-rbf");
  return guarded("one-class SVM model", [&] {
    OcsvmModel m;
    m.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    m.scaler.lower = j.at("scale_lower").get<std::vector<double>>();
    m.scaler.upper = j.at("scale_upper").get<std::vector<double>>();
    m.nu = j.at("nu").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.rho = j.at("rho").get<double>();
    m.duality_gap = j.at("duality_gap").get<double>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    const auto d = m.vocabulary.size();
    if (m.scaler.lower.size() != d || m.scaler.upper.size() != d || m.coefficients.size() != m.support_vectors.size())
      throw SchemaError("one-class SVM model: parameter shapes do not match vocabulary");
    for (const auto& sv : m.support_vectors) {
      if (sv.size() != d) throw SchemaError("one-class SVM model: support vector width mismatch");
    }
    return m;
  });
}

}  // namespace detail

std::string dump_model(const NaiveBayesModel& model) { return detail::to_json(model).dump(); }
std::string dump_model(const LogisticModel& model) { return detail::to_json(model).dump(); }
std::string dump_model(const RandomForestModel& model) { return detail::to_json(model).dump(); }
std::string dump_model(const OcsvmModel& model) { return detail::to_json(model).dump(); }

NaiveBayesModel load_naive_bayes(std::string_view text) {
  return detail::naive_bayes_from_json(locflow::detail::parse_document(text, "naive Bayes model"));
}
LogisticModel load_logistic(std::string_view text) {
  return detail::logistic_from_json(locflow::detail::parse_document(text, "logistic model"));
}
RandomForestModel load_random_forest(std::string_view text) {
  return detail::random_forest_from_json(locflow::detail::parse_document(text, "random forest model"));
}
OcsvmModel load_ocsvm(std::string_view text) {
  return detail::ocsvm_from_json(locflow::detail::parse_document(text, "one-class SVM model"));
}

}  // namespace locflow::learn
