#include "terrakit/csv.hpp"

#include <charconv>
#include <cmath>

#include "terrakit/error.hpp"
#include "terrakit/io_util.hpp"

namespace terrakit {
namespace {

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\n\r") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

struct CellFormatter {
  std::string& out;
  void operator()(std::monostate) const {}
  void operator()(double v) const { out += format_csv_number(v); }
  void operator()(std::int64_t v) const { out += std::to_string(v); }
  void operator()(const std::string& v) const { append_field(out, v); }
};

}  // namespace

std::string format_csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed,
                                 kCsvDecimals);
  if (ec != std::errc{}) throw Error(Errc::invalid_input, "number too large for CSV");
  std::string_view text(buf, static_cast<std::size_t>(end - buf));
  // "-0.000000" would not survive a textual comparison with "0.000000".
  if (text.find_first_not_of("-0.") == std::string_view::npos && text.front() == '-') {
    text.remove_prefix(1);
  }
  return std::string(text);
}

std::string format_csv_table(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    append_field(out, table.header[i]);
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() != table.header.size()) {
      throw Error(Errc::invalid_input,
                  "CSV row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                      " fields, header has " + std::to_string(table.header.size()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(CellFormatter{out}, row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv_table(const CsvTable& table, const std::filesystem::path& path) {
  write_file_atomic(path, format_csv_table(table));
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty()) throw Error(Errc::parse, "CSV: stray quote inside unquoted field");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field += ch;
        field_started = true;
    }
  }
  if (in_quotes) throw Error(Errc::parse, "CSV: unterminated quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  return parse_csv(read_text_file(path));
}

}  // namespace terrakit
