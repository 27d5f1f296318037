#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

namespace locflow::pipeline {

/// Ad and analytics host suffixes. Matching is on label boundaries:
/// "ads.x.com" matches "x.com" but "badx.com" does not.
class HostnameList {
 public:
  HostnameList() = default;

  /// One hostname per line; "#" starts a comment. Throws DataError on an
  /// entry carrying a scheme, path or whitespace.
  static HostnameList parse(std::string_view text, std::string source = "inline");
  static HostnameList load(const std::filesystem::path& path);

  void add(std::string_view host);
  bool matches(std::string_view host) const;

  const std::set<std::string>& entries() const { return entries_; }
  const std::string& source() const { return source_; }
  std::string digest() const;
  bool empty() const { return entries_.empty(); }

 private:
  std::set<std::string> entries_;
  std::string source_ = "inline";
};

/// Lowercased host with any port and trailing dot removed.
std::string normalize_host(std::string_view host);

}  // namespace locflow::pipeline
