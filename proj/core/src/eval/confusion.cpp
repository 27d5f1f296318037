#include "locflow/eval/confusion.hpp"

#include "locflow/common/errors.hpp"

namespace locflow::eval {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> label_space)
    : labels_(std::move(label_space)), counts_(labels_.size() * labels_.size(), 0) {}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::size_t times) {
  if (actual >= size() || predicted >= size()) throw DataError("confusion matrix: label index out of range");
  counts_[actual * size() + predicted] += times;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.labels_ != labels_) throw DataError("confusion matrix: merging different label spaces");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::size_t ConfusionMatrix::actual_total(std::size_t actual) const {
  std::size_t t = 0;
  for (std::size_t p = 0; p < size(); ++p) t += count(actual, p);
  return t;
}

}  // namespace locflow::eval
