#pragma once

// Small string and file helpers shared by the text formats.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fixrank {

std::vector<std::string_view> split(std::string_view s, char sep);
/// Splits on '\n'; a trailing newline does not produce an empty last line.
/// '\r' before '\n' is dropped.
std::vector<std::string_view> split_lines(std::string_view s);
std::string_view trim(std::string_view s);
// The results view into the argument, which must outlive them.
std::vector<std::string_view> split(std::string&&, char) = delete;
std::vector<std::string_view> split_lines(std::string&&) = delete;
std::string_view trim(std::string&&) = delete;
std::string join(const std::vector<std::string>& parts, std::string_view sep);

inline bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }
inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace fixrank
