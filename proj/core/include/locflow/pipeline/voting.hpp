#pragma once

#include <optional>

namespace locflow::pipeline {

/// The common label when all three predictions agree, otherwise nothing.
template <class Label>
std::optional<Label> consensus_vote(const Label& p_rf, const Label& p_nb, const Label& p_lr) {
  if (p_rf == p_nb && p_nb == p_lr) return p_rf;
  return std::nullopt;
}

}  // namespace locflow::pipeline
