#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace surftopo {

/// Writes `data` to a sibling temporary file and renames it over `path`, so
/// readers never observe a partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

/// Whole file as bytes. Throws IoError.
std::string read_file(const std::filesystem::path& path);

/// Creates `dir` and its parents if needed. Throws IoError.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace surftopo
