#pragma once

#include <filesystem>
#include <string_view>

namespace locflow {

/// Writes `contents` to `path` via a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Reads a whole file; throws DataError when missing or unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace locflow
