#pragma once

// Point reference aggregation and retrieval assessment metrics.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tauomega {

struct ReferenceRecord {
  double timestamp{};
  std::vector<double> point_sm;  // m³/m³
  double point_temperature_k{};
};

/// Arithmetic mean of the point measurements.
double spatial_average(const ReferenceRecord& record);
/// Population standard deviation of the point measurements.
double spatial_std(const ReferenceRecord& record);

enum MetricsFlag : unsigned {
  kRZeroVariance = 1u << 0,  // R undefined
  kRShortSeries = 1u << 1,   // fewer than kMinSeriesForR pairs
};

inline constexpr std::size_t kMinSeriesForR = 3;

struct MetricsReport {
  double bias{};
  double rmse{};
  double ubrmse{};
  std::optional<double> r;
  std::size_t n = 0;
  unsigned flags = 0;
};

/// Bias, RMSE, ubRMSE and Pearson R with population (1/n) moments.
MetricsReport metrics(const Eigen::ArrayXd& obs, const Eigen::ArrayXd& ref);
MetricsReport metrics(std::span<const double> obs, std::span<const double> ref);

std::string metrics_flags_to_string(unsigned flags);

/// Reference file with header `timestamp,sm_1..sm_k,soil_temp_k`.
std::vector<ReferenceRecord> read_reference(std::istream& in, const std::string& source);
std::vector<ReferenceRecord> read_reference_file(const std::filesystem::path& path);

inline constexpr double kDefaultPairWindowS = 30.0 * 60.0;

/// Reference record closest in time to `timestamp`, if within `window_s`.
/// Ties go to the earlier record.
std::optional<std::size_t> nearest_reference(std::span<const ReferenceRecord> refs,
                                             double timestamp,
                                             double window_s = kDefaultPairWindowS);

struct PairedSeries {
  std::vector<double> obs;
  std::vector<double> ref;
  std::vector<double> timestamps;
  std::size_t unmatched = 0;
};

/// Matches each (timestamp, value) observation to its nearest reference
/// record; unmatched observations are dropped and counted.
PairedSeries pair_by_time(std::span<const std::pair<double, double>> observations,
                          std::span<const ReferenceRecord> refs,
                          double window_s = kDefaultPairWindowS);

}  // namespace tauomega
