#include "tauomega/ancillary.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tauomega/io.hpp"
#include "tauomega/types.hpp"

namespace tauomega {

double ndvi(double red, double nir) {
  const double sum = nir + red;
  if (sum == 0 || !std::isfinite(sum)) throw DomainError("red+nir", "must be finite and nonzero");
  return (nir - red) / sum;
}

double NdviSeries::at(int day) const {
  if (values_.empty()) throw DomainError("ndvi_series", "empty");
  if (day <= first_day_) return values_.front();
  if (day >= last_day()) return values_.back();
  return values_[static_cast<std::size_t>(day - first_day_)];
}

NdviSeries interpolate_daily(std::span<const std::pair<int, double>> samples) {
  if (samples.size() < 2) throw DomainError("samples", "at least two NDVI samples are required");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].first == samples[i - 1].first)
      throw DomainError("samples", "duplicate date " + io::format_date(samples[i].first));
    if (samples[i].first < samples[i - 1].first)
      throw DomainError("samples", "dates must be strictly increasing");
  }
  const int first = samples.front().first;
  const int last = samples.back().first;
  std::vector<double> values(static_cast<std::size_t>(last - first + 1));
  std::size_t k = 0;
  for (int day = first; day <= last; ++day) {
    while (samples[k + 1].first < day) ++k;
    const auto [d0, v0] = samples[k];
    const auto [d1, v1] = samples[k + 1];
    double v;
    if (day == d0)
      v = v0;
    else if (day == d1)
      v = v1;
    else
      v = v0 + (v1 - v0) * static_cast<double>(day - d0) / static_cast<double>(d1 - d0);
    values[static_cast<std::size_t>(day - first)] = v;
  }
  return {first, std::move(values)};
}

TauEstimate ndvi_to_tau(double ndvi_value, const TauCoefficients& c) {
  if (!(ndvi_value >= -1 && ndvi_value <= 1)) throw DomainError("ndvi", "must lie in [-1, 1]");
  if (!(c.b >= 0)) throw DomainError("b", "must be >= 0");
  if (ndvi_value <= c.ndvi_floor) return {0.0, false};
  const double vwc = c.vwc_c0 + ndvi_value * (c.vwc_c1 + ndvi_value * c.vwc_c2);
  const double tau = c.b * vwc;
  if (tau < 0) return {0.0, true};
  return {tau, false};
}

TauEstimate ndvi_to_tau(double ndvi_value, const std::string& land_cover,
                        const TauCoefficientTable& table) {
  return ndvi_to_tau(ndvi_value, table.at(land_cover));
}

const TauCoefficients& TauCoefficientTable::at(const std::string& land_cover) const {
  if (auto it = entries_.find(land_cover); it != entries_.end()) return it->second;
  throw DataError("no tau coefficients for land cover '" + land_cover + "'");
}

TauCoefficientTable TauCoefficientTable::parse(std::istream& in, const std::string& source) {
  const auto kv = io::KeyValueFile::parse(in, source);
  std::map<std::string, TauCoefficients> entries;
  for (const auto& [key, value] : kv.values()) {
    const auto dot = key.rfind('.');
    if (dot == std::string::npos || dot == 0)
      throw DataError(kv.where(key) + ": expected '<land_cover>.<field>'");
    const std::string cls = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    auto& c = entries[cls];
    const double v = kv.number(key);
    if (field == "b")
      c.b = v;
    else if (field == "vwc_c0")
      c.vwc_c0 = v;
    else if (field == "vwc_c1")
      c.vwc_c1 = v;
    else if (field == "vwc_c2")
      c.vwc_c2 = v;
    else if (field == "ndvi_floor")
      c.ndvi_floor = v;
    else
      throw DataError(kv.where(key) + ": unknown field '" + field + "'");
    if (field == "b" && v < 0) throw DataError(kv.where(key) + ": b must be >= 0");
  }
  return TauCoefficientTable(std::move(entries));
}

TauCoefficientTable TauCoefficientTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return parse(in, path.string());
}

TauCoefficientTable TauCoefficientTable::defaults() {
  std::istringstream in(
      "bare_soil.b = 0\n"
      "grassland.b = 0.13\n"
      "grassland.vwc_c0 = 0\n"
      "grassland.vwc_c1 = -0.3215\n"
      "grassland.vwc_c2 = 1.9134\n"
      "grassland.ndvi_floor = 0.1\n");
  return parse(in, "<defaults>");
}

std::vector<ReflectanceSample> read_reflectance(std::istream& in, const std::string& source) {
  const auto table = io::read_csv(in, source);
  const auto d = table.column("date");
  const auto r = table.column("red");
  const auto n = table.column("nir");
  std::vector<ReflectanceSample> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ReflectanceSample s{table.date(i, d), table.number(i, r), table.number(i, n)};
    if (!(s.red + s.nir > 0))
      throw DataError(table.where(i) + ": red + nir must be > 0");
    if (!out.empty() && !(s.date > out.back().date))
      throw DataError(table.where(i) + ": dates must be strictly increasing");
    out.push_back(s);
  }
  return out;
}

std::vector<ReflectanceSample> read_reflectance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return read_reflectance(in, path.string());
}

NdviSeries daily_ndvi(std::span<const ReflectanceSample> samples) {
  std::vector<std::pair<int, double>> knots;
  knots.reserve(samples.size());
  for (const auto& s : samples) knots.emplace_back(s.date, ndvi(s.red, s.nir));
  return interpolate_daily(knots);
}

}  // namespace tauomega
