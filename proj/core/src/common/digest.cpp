#include "locflow/common/digest.hpp"

#include <cstdio>

#include "locflow/common/atomic_file.hpp"

namespace locflow {

void Fnv1a::update(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state_ ^= bytes[i];
    state_ *= 0x100000001b3ULL;
  }
}

void Fnv1a::update(std::string_view bytes) { update(bytes.data(), bytes.size()); }

std::string Fnv1a::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  Fnv1a h;
  h.update(bytes);
  return h.value();
}

std::string fnv1a_hex(std::string_view bytes) {
  Fnv1a h;
  h.update(bytes);
  return h.hex();
}

std::string file_digest(const std::string& path) { return fnv1a_hex(read_file(path)); }

}  // namespace locflow
