#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kgrec {

/// Writes content via a sibling temp file + rename so concurrent readers
/// never observe a partial file.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Fixed-point formatting, e.g. format_fixed(0.99916, 4) == "0.9992".
std::string format_fixed(double value, int decimals);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Splits on a single delimiter; keeps empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

/// Strict integer parse of a whole token; returns false on any trailing junk.
bool parse_int64(std::string_view token, std::int64_t& out);
bool parse_double(std::string_view token, double& out);

/// Worker count for parallel evaluation, from KGREC_THREADS (default 1).
int threads_from_env();

}  // namespace kgrec
