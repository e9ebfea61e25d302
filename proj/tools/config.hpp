#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace terrakit::cli {

/**
 * Plain key-value run description.
 *
 * Grammar, one statement per line:
 *   # comment            (a '#' anywhere starts a comment)
 *   [section]            (keys below it are addressed as "section.key")
 *   key = value
 * Keys before any section header live in the root ("key"). Blank values and
 * repeated keys are errors. Relative paths are resolved against the
 * directory holding the file.
 */
class KeyValueConfig {
public:
  static KeyValueConfig parse(std::string_view text, std::filesystem::path base_dir = {});
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  /// Comma-separated numbers.
  std::vector<double> numbers(const std::string& key) const;
  /// Path value resolved against the config directory; nullopt if absent.
  std::optional<std::filesystem::path> path(const std::string& key) const;

  /// Throws Errc::parse naming the first key not in `known`.
  void reject_unknown(const std::set<std::string>& known) const;

  const std::filesystem::path& base_dir() const { return base_dir_; }

private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::filesystem::path base_dir_;
};

double parse_number(std::string_view text, std::string_view what);
std::vector<double> parse_number_list(std::string_view text, std::string_view what);

}  // namespace terrakit::cli
