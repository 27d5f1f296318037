#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace locflow::pipeline {

enum class InstanceVerdict { expected, unexpected, filtered };

std::string_view to_string(InstanceVerdict verdict);
/// Throws DataError for anything but expected, unexpected or filtered.
InstanceVerdict instance_verdict_from_string(std::string_view text);

struct InstanceLabel {
  std::string instance_id;
  InstanceVerdict verdict = InstanceVerdict::filtered;

  friend bool operator==(const InstanceLabel&, const InstanceLabel&) = default;
};

/// JSON lines, one label per instance. Also used for the hand-labelled
/// training split, where only expected/unexpected are meaningful.
std::vector<InstanceLabel> read_instance_labels(std::istream& in);
void write_instance_labels(std::ostream& out, const std::vector<InstanceLabel>& labels);

}  // namespace locflow::pipeline
