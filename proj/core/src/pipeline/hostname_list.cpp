#include "locflow/pipeline/hostname_list.hpp"

#include "locflow/common/atomic_file.hpp"
#include "locflow/common/digest.hpp"
#include "locflow/common/errors.hpp"
#include "locflow/common/text.hpp"

namespace locflow::pipeline {

std::string normalize_host(std::string_view host) {
  std::string h = text::to_lower(text::trim(host));
  if (!h.empty() && h.front() == '[') {
    const auto close = h.find(']');
    return close == std::string::npos ? h : h.substr(1, close - 1);
  }
  if (const auto colon = h.find(':'); colon != std::string::npos && h.find(':', colon + 1) == std::string::npos)
    h.erase(colon);
  while (!h.empty() && h.back() == '.') h.pop_back();
  return h;
}

HostnameList HostnameList::parse(std::string_view text, std::string source) {
  HostnameList list;
  list.source_ = std::move(source);
  std::size_t number = 0;
  for (auto line : text::split(text, '\n')) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    try {
      list.add(line);
    } catch (const DataError& e) {
      throw DataError(list.source_ + " line " + std::to_string(number) + ": " + e.what());
    }
  }
  return list;
}

HostnameList HostnameList::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.filename().string());
}

void HostnameList::add(std::string_view host) {
  if (host.find("://") != std::string_view::npos || host.find('/') != std::string_view::npos ||
      host.find_first_of(" \t") != std::string_view::npos) {
    throw DataError("hostname list entry '" + std::string(host) + "' must be a bare hostname");
  }
  auto h = normalize_host(host);
  while (!h.empty() && h.front() == '.') h.erase(h.begin());
  if (h.empty()) throw DataError("empty hostname list entry");
  entries_.insert(std::move(h));
}

bool HostnameList::matches(std::string_view host) const {
  const auto h = normalize_host(host);
  for (std::size_t pos = 0; pos != std::string::npos;) {
    if (entries_.count(h.substr(pos))) return true;
    pos = h.find('.', pos);
    if (pos != std::string::npos) ++pos;
  }
  return false;
}

std::string HostnameList::digest() const {
  Fnv1a d;
  for (const auto& e : entries_) {
    d.update(e);
    d.update("\n");
  }
  return d.hex();
}

}  // namespace locflow::pipeline
