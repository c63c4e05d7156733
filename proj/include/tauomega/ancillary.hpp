#pragma once

// Optical vegetation index ingestion and conversion to nadir vegetation
// optical depth for the single-channel retrieval.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tauomega {

struct ReflectanceSample {
  int date{};  // days since 1970-01-01
  double red{};
  double nir{};
};

double ndvi(double red, double nir);

/// Daily NDVI values on consecutive days. Built by interpolate_daily.
class NdviSeries {
public:
  NdviSeries() = default;
  NdviSeries(int first_day, std::vector<double> values)
      : first_day_(first_day), values_(std::move(values)) {}

  int first_day() const { return first_day_; }
  int last_day() const { return first_day_ + static_cast<int>(values_.size()) - 1; }
  const std::vector<double>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  /// Value on `day`; flat outside the covered range.
  double at(int day) const;

private:
  int first_day_ = 0;
  std::vector<double> values_;
};

/// Piecewise-linear daily interpolation through (day, ndvi) knots.
NdviSeries interpolate_daily(std::span<const std::pair<int, double>> samples);

struct TauCoefficients {
  // vegetation water content polynomial VWC = c0 + c1*NDVI + c2*NDVI^2 (kg/m²)
  double vwc_c0 = 0.0;
  double vwc_c1 = 0.0;
  double vwc_c2 = 0.0;
  double b = 0.0;           // tau = b * VWC
  double ndvi_floor = 0.0;  // bare-soil floor: tau = 0 at or below it
};

struct TauEstimate {
  double tau{};
  bool clamped{};
};

class TauCoefficientTable {
public:
  TauCoefficientTable() = default;
  explicit TauCoefficientTable(std::map<std::string, TauCoefficients> entries)
      : entries_(std::move(entries)) {}

  /// Key-value file with keys `<land_cover>.b`, `<land_cover>.vwc_c0` ...
  static TauCoefficientTable load(const std::filesystem::path& path);
  static TauCoefficientTable parse(std::istream& in, const std::string& source);
  /// Shipped defaults for bare_soil and grassland.
  static TauCoefficientTable defaults();

  const TauCoefficients& at(const std::string& land_cover) const;
  bool contains(const std::string& land_cover) const { return entries_.count(land_cover) != 0; }
  const std::map<std::string, TauCoefficients>& entries() const { return entries_; }

private:
  std::map<std::string, TauCoefficients> entries_;
};

TauEstimate ndvi_to_tau(double ndvi_value, const TauCoefficients& coeffs);
TauEstimate ndvi_to_tau(double ndvi_value, const std::string& land_cover,
                        const TauCoefficientTable& table);

/// Reflectance file with header `date,red,nir`.
std::vector<ReflectanceSample> read_reflectance(std::istream& in, const std::string& source);
std::vector<ReflectanceSample> read_reflectance_file(const std::filesystem::path& path);

/// NDVI per sample followed by daily interpolation.
NdviSeries daily_ndvi(std::span<const ReflectanceSample> samples);

}  // namespace tauomega
