#include "locflow/common/sparse_vector.hpp"

#include <stdexcept>

namespace locflow {

void SparseFeatureVector::set(std::string_view name, double value) {
  if (name.empty()) throw std::invalid_argument("feature name must be non-empty");
  if (value == 0.0) {
    if (auto it = entries_.find(name); it != entries_.end()) entries_.erase(it);
    return;
  }
  if (auto it = entries_.find(name); it != entries_.end()) {
    it->second = value;
  } else {
    entries_.emplace(std::string(name), value);
  }
}

double SparseFeatureVector::get(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? 0.0 : it->second;
}

bool SparseFeatureVector::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

void SparseFeatureVector::merge(const SparseFeatureVector& other) {
  for (const auto& [name, value] : other.entries_) entries_.insert_or_assign(name, value);
}

}  // namespace locflow
