#include "tauomega/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "tauomega/types.hpp"

namespace tauomega {

std::string_view to_string(Polarization p) { return p == Polarization::H ? "H" : "V"; }

std::string_view to_string(DielectricModel m) {
  return m == DielectricModel::Topp ? "topp" : "mironov";
}

DielectricModel parse_dielectric(std::string_view s) {
  if (s == "mironov" || s == "Mironov") return DielectricModel::Mironov;
  if (s == "topp" || s == "Topp") return DielectricModel::Topp;
  throw DataError("unknown dielectric model '" + std::string(s) + "'");
}

}  // namespace tauomega

namespace tauomega::io {

namespace {

std::optional<double> to_double(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

template <typename Int>
bool read_int(std::string_view s, Int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::optional<std::chrono::sys_days> civil(std::string_view s) {
  // YYYY-MM-DD
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  if (!read_int(s.substr(0, 4), y) || !read_int(s.substr(5, 2), m) || !read_int(s.substr(8, 2), d))
    return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd};
}

}  // namespace

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto c = find_column(name)) return *c;
  throw DataError(source + ":1: missing column '" + std::string(name) + "'");
}

std::string CsvTable::where(std::size_t row) const {
  return source + ":" + std::to_string(lines.at(row));
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  if (auto v = to_double(rows.at(row).at(col)); v && std::isfinite(*v)) return *v;
  throw DataError(where(row) + ": column '" + header.at(col) + "' is not a finite number: '" +
                  rows[row][col] + "'");
}

double CsvTable::timestamp(std::size_t row, std::size_t col) const {
  if (auto v = parse_iso8601(rows.at(row).at(col))) return *v;
  throw DataError(where(row) + ": column '" + header.at(col) + "' is not an ISO-8601 UTC time: '" +
                  rows[row][col] + "'");
}

int CsvTable::date(std::size_t row, std::size_t col) const {
  if (auto v = parse_date(rows.at(row).at(col))) return *v;
  throw DataError(where(row) + ": column '" + header.at(col) + "' is not an ISO-8601 date: '" +
                  rows[row][col] + "'");
}

CsvTable read_csv(std::istream& in, std::string source) {
  CsvTable table;
  table.source = std::move(source);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty() || line.starts_with('#')) continue;
    auto cells = split(line, ',');
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size())
      throw DataError(table.source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(cells.size()));
    table.rows.push_back(std::move(cells));
    table.lines.push_back(line_no);
  }
  if (!have_header) throw DataError(table.source + ": empty file (no header)");
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return read_csv(in, path.string());
}

std::optional<double> parse_iso8601(std::string_view text) {
  const std::string t = trim(text);
  std::string_view s = t;
  if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ')) return std::nullopt;
  const auto day = civil(s.substr(0, 10));
  if (!day) return std::nullopt;
  if (s[13] != ':' || s[16] != ':') return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (!read_int(s.substr(11, 2), hh) || !read_int(s.substr(14, 2), mm) ||
      !read_int(s.substr(17, 2), ss))
    return std::nullopt;
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  std::string_view rest = s.substr(19);
  double frac = 0;
  if (!rest.empty() && rest.front() == '.') {
    std::size_t n = 1;
    while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
    if (n == 1) return std::nullopt;
    frac = *to_double("0" + std::string(rest.substr(0, n)));
    rest.remove_prefix(n);
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000")) return std::nullopt;
  const auto days = day->time_since_epoch().count();
  return static_cast<double>(days) * 86400.0 + hh * 3600.0 + mm * 60.0 + ss + frac;
}

std::string format_iso8601(double seconds) {
  const double whole = std::floor(seconds);
  auto millis = static_cast<long long>(std::llround((seconds - whole) * 1000.0));
  auto secs = static_cast<long long>(whole);
  if (millis == 1000) {
    ++secs;
    millis = 0;
  }
  const long long days = secs >= 0 ? secs / 86400 : (secs - 86399) / 86400;
  const long long rem = secs - days * 86400;
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  char buf[64];
  if (millis == 0)
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), rem / 3600, rem / 60 % 60, rem % 60);
  else
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), rem / 3600, rem / 60 % 60, rem % 60,
                  millis);
  return buf;
}

std::optional<int> parse_date(std::string_view text) {
  const auto d = civil(trim(text));
  if (!d) return std::nullopt;
  return static_cast<int>(d->time_since_epoch().count());
}

std::string format_date(int days) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

std::string fixed(double value, int precision) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s = buf;
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

KeyValueFile KeyValueFile::parse(std::istream& in, std::string source) {
  KeyValueFile kv;
  kv.source_ = std::move(source);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw DataError(kv.source_ + ":" + std::to_string(line_no) + ": malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw DataError(kv.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty())
      throw DataError(kv.source_ + ":" + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (kv.values_.count(key))
      throw DataError(kv.source_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    kv.values_[key] = trim(std::string_view(t).substr(eq + 1));
    kv.lines_[key] = line_no;
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return parse(in, path.string());
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  return std::nullopt;
}

std::string KeyValueFile::where(const std::string& key) const {
  if (auto it = lines_.find(key); it != lines_.end())
    return source_ + ":" + std::to_string(it->second);
  return source_;
}

std::string KeyValueFile::require(const std::string& key) const {
  if (auto v = get(key)) return *v;
  throw DataError(source_ + ": missing key '" + key + "'");
}

double KeyValueFile::number(const std::string& key) const {
  const auto text = require(key);
  if (auto v = to_double(text); v && std::isfinite(*v)) return *v;
  throw DataError(where(key) + ": '" + key + "' is not a finite number: '" + text + "'");
}

double KeyValueFile::number_or(const std::string& key, double fallback) const {
  return contains(key) ? number(key) : fallback;
}

std::vector<std::string> KeyValueFile::children(const std::string& prefix) const {
  std::set<std::string> names;
  const std::string p = prefix + ".";
  for (const auto& [key, value] : values_) {
    if (!key.starts_with(p)) continue;
    const auto rest = key.substr(p.size());
    names.insert(rest.substr(0, rest.find('.')));
  }
  return {names.begin(), names.end()};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(tmp.string() + ": cannot write");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tauomega::io
