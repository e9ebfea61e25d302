#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace terrakit {

std::string read_text_file(const std::filesystem::path& path);

/// Writes `contents` to a sibling temp file and renames it over `path`, so a
/// failed write never leaves a truncated output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace terrakit
