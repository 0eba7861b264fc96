#pragma once

#include <filesystem>
#include <string>

namespace opdsim {

std::string read_text_file(const std::filesystem::path& path);

// Writes via a sibling temp file and rename, so readers never observe a
// partially written file.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace opdsim
