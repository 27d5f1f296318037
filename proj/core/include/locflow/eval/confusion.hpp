#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace locflow::eval {

/// counts[actual][predicted] over an ordered label space.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> label_space);

  void add(std::size_t actual, std::size_t predicted, std::size_t times = 1);
  void merge(const ConfusionMatrix& other);

  std::size_t count(std::size_t actual, std::size_t predicted) const { return counts_[actual * size() + predicted]; }
  std::size_t size() const { return labels_.size(); }
  std::size_t total() const;
  std::size_t actual_total(std::size_t actual) const;
  const std::vector<std::string>& label_space() const { return labels_; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::size_t> counts_;
};

}  // namespace locflow::eval
