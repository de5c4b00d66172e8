#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace flexagg::csv {

/// Six significant digits, '.' separator, no grouping ("%.6g").
std::string format_number(double value);

inline const char* format_bool(bool b) noexcept { return b ? "true" : "false"; }

/// Splits one CSV record on commas; fields are not quoted in our formats.
std::vector<std::string> split_record(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws InvalidArgument when absent.
    std::size_t column(std::string_view name) const;
};

/// Reads a whole file; throws IoError on failure.
Table read_file(const std::filesystem::path& path);

/// Writes text atomically enough for our purposes; throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

double parse_double(const std::string& field);

}  // namespace flexagg::csv
