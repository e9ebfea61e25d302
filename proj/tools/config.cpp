#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "terrakit/error.hpp"
#include "terrakit/io_util.hpp"

namespace terrakit::cli {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw Error(Errc::parse, "config line " + std::to_string(line) + ": " + message);
}

}  // namespace

double parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(Errc::parse, std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
  return v;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma - start), what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::filesystem::path base_dir) {
  KeyValueConfig cfg;
  cfg.base_dir_ = std::move(base_dir);
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) fail(line_no, "invalid section name");
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_name(key)) fail(line_no, "invalid key '" + std::string(key) + "'");
    if (value.empty()) fail(line_no, "empty value for '" + std::string(key) + "'");
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (cfg.values_.count(full)) fail(line_no, "duplicate key '" + full + "'");
    cfg.values_[full] = std::string(value);
    cfg.lines_[full] = line_no;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  return parse(read_text_file(path), path.parent_path());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::text(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KeyValueConfig::number(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_number(*v, key) : fallback;
}

bool KeyValueConfig::flag(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "1") return true;
  if (*v == "false" || *v == "no" || *v == "0") return false;
  throw Error(Errc::parse, key + ": expected true or false, got '" + *v + "'");
}

std::vector<double> KeyValueConfig::numbers(const std::string& key) const {
  const auto v = get(key);
  return v ? parse_number_list(*v, key) : std::vector<double>{};
}

std::optional<std::filesystem::path> KeyValueConfig::path(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  std::filesystem::path p(*v);
  return p.is_absolute() ? p : base_dir_ / p;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.count(key)) {
      throw Error(Errc::parse,
                  "config line " + std::to_string(lines_.at(key)) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace terrakit::cli
