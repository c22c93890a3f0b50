#pragma once

#include <filesystem>
#include <string>

namespace flakelex {

// Writes via a sibling temp file and renames into place.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace flakelex
