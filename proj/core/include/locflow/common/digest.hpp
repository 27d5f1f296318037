#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace locflow {

/// 64-bit FNV-1a. Used for content digests in manifests and bundles, not for security.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  void update(const void* data, std::size_t size);
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);

/// Digest of a file's contents; throws DataError if unreadable.
std::string file_digest(const std::string& path);

}  // namespace locflow
