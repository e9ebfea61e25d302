#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace terrakit {

/// A CSV field. Doubles are written with exactly six decimals; `std::monostate`
/// is an empty field (used for values that do not apply, e.g. perimeter of the
/// whole-raster row).
using CsvCell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

inline constexpr int kCsvDecimals = 6;

std::string format_csv_number(double value);

/// RFC 4180 text: comma separated, LF line endings, header first. Fields
/// containing a comma, quote or newline are quoted.
std::string format_csv_table(const CsvTable& table);

/// Writes atomically (temp file + rename). Throws Error(io) on failure.
void write_csv_table(const CsvTable& table, const std::filesystem::path& path);

/// Parses RFC 4180 text into string fields (first row is returned as a row,
/// not split off).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace terrakit
