#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace chiraag {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);

// Lowercase ASCII; runs of whitespace become single underscores.
std::string normalize_heading(std::string_view heading);

bool is_identifier(std::string_view s);

// Replaces every occurrence of `from` (non-empty) with `to`.
std::string replace_all(std::string text, std::string_view from, std::string_view to);

// Replaces bytes that do not form valid UTF-8 with '?'.
std::string sanitize_utf8(std::string_view bytes);

} // namespace chiraag
