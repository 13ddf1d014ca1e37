#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ssradio::csv {

/// Shortest decimal text that round-trips to the same double.
std::string fmt(double v);

/// Comment line recording scenario name, seed and tool version.
std::string header_comment(const std::string& config_name, std::uint64_t seed);

/// Write `content` to a temporary sibling and rename it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// Split one CSV line on commas (no quoting support; none of our files need it).
std::vector<std::string> split(const std::string& line);

}  // namespace ssradio::csv
