#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "locflow/capture/flow.hpp"

namespace locflow::capture {

struct SessionizeOptions {
  double idle_timeout = 60.0;  // seconds
};

struct SessionizeDiagnostics {
  std::size_t accepted = 0;
  std::size_t malformed = 0;
};

/// Groups packets into flows keyed by the uplink-oriented 4-tuple.
///
/// A new session starts on a key when the gap since the key's previous packet
/// exceeds `idle_timeout`. Flows come out in order of their first packet.
/// Malformed records (see PacketMeta::valid) and records whose timestamp runs
/// backwards are skipped and tallied, never fatal.
std::vector<HttpFlow> sessionize(std::span<const PacketMeta> packets,
                                 const SessionizeOptions& options = {},
                                 SessionizeDiagnostics* diagnostics = nullptr);

}  // namespace locflow::capture
