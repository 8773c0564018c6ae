#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace dhedge {

// Writes to a temporary sibling then renames over `path`, creating parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace dhedge
