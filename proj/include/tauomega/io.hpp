#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tauomega::io {

/// Comma-separated table with a header row. Cells are kept as text; typed
/// accessors report the file and line on failure.
class CsvTable {
public:
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  std::optional<std::size_t> find_column(std::string_view name) const;
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::size_t col) const;
  double timestamp(std::size_t row, std::size_t col) const;
  int date(std::size_t row, std::size_t col) const;
  const std::string& text(std::size_t row, std::size_t col) const { return rows[row][col]; }
  std::string where(std::size_t row) const;
};

CsvTable read_csv(std::istream& in, std::string source);
CsvTable read_csv_file(const std::filesystem::path& path);

/// Seconds since the Unix epoch (UTC) from ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff][Z|+00:00]".
std::optional<double> parse_iso8601(std::string_view text);
/// Inverse of parse_iso8601; milliseconds are printed only when nonzero.
std::string format_iso8601(double seconds);

/// Days since 1970-01-01 from "YYYY-MM-DD".
std::optional<int> parse_date(std::string_view text);
std::string format_date(int days);

/// Fixed-point formatting with negative zero normalised.
std::string fixed(double value, int precision = 6);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Flat `key = value` text. `#` starts a comment; a `[section]` line
/// prefixes following keys with `section.`.
class KeyValueFile {
public:
  static KeyValueFile parse(std::istream& in, std::string source);
  static KeyValueFile load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  bool contains(const std::string& key) const { return values_.count(key) != 0; }
  /// Distinct next path segments after `prefix.` (e.g. site names under "site").
  std::vector<std::string> children(const std::string& prefix) const;
  const std::map<std::string, std::string>& values() const { return values_; }
  const std::string& source() const { return source_; }
  std::string where(const std::string& key) const;

private:
  std::string source_;
  std::map<std::string, std::string> values_;
  std::map<std::string, std::size_t> lines_;
};

/// Writes via a temporary file and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tauomega::io
