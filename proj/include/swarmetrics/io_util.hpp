#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace swarmetrics {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Strict full-string parse; std::nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace swarmetrics
