#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace threatwatch {

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Non-empty, trimmed lines with '#' comments removed.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

std::string trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);

/// Location of the data files bundled with the repository.
std::filesystem::path bundled_data_dir();
std::filesystem::path bundled_schema_dir();

}  // namespace threatwatch
