#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace locflow {

/// Named feature map shared by the lexical and context featurizers.
///
/// Zero-valued entries are never stored, so `size()` is the number of active
/// features. Iteration is in lexicographic name order.
class SparseFeatureVector {
 public:
  using Map = std::map<std::string, double, std::less<>>;
  using const_iterator = Map::const_iterator;

  /// Sets `name` to `value`; a zero value removes the entry.
  void set(std::string_view name, double value);
  /// Sets a binary feature to 1.
  void set_flag(std::string_view name) { set(name, 1.0); }

  double get(std::string_view name) const;
  bool contains(std::string_view name) const;

  /// Adds every entry of `other`, overwriting existing values.
  void merge(const SparseFeatureVector& other);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

  friend bool operator==(const SparseFeatureVector&, const SparseFeatureVector&) = default;

 private:
  Map entries_;
};

}  // namespace locflow
