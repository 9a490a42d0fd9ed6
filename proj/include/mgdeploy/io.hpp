#pragma once

#include <filesystem>
#include <string>

namespace mgdeploy {

// Both throw IoError on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace mgdeploy
