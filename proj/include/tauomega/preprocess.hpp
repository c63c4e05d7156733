#pragma once

// Raw voltage calibration, brightness-temperature quality screening and the
// per-session representative value.

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tauomega/surface.hpp"
#include "tauomega/types.hpp"

namespace tauomega {

struct RawSample {
  double timestamp{};  // UTC seconds
  double v_h{};
  double v_v{};
};

struct CalibrationParams {
  double gain_h = 1.0;  // K/V
  double gain_v = 1.0;
  double offset_h = 0.0;  // K
  double offset_v = 0.0;

  void validate() const;
};

enum QualityFlag : unsigned {
  kMaxExceeded = 1u << 0,
  kMinViolated = 1u << 1,
  kPolOrderViolated = 1u << 2,
};

inline constexpr std::array<QualityFlag, 3> kAllQualityFlags{kMaxExceeded, kMinViolated,
                                                             kPolOrderViolated};

std::string_view flag_name(QualityFlag f);
/// "MaxExceeded|PolOrderViolated"; empty for an accepted record.
std::string flags_to_string(unsigned flags);

struct ObservationRecord {
  double timestamp{};
  TbPair tb{};
  unsigned quality_flags = 0;
};

inline constexpr double kTbMax = 320.0;

struct FilterThresholds {
  double tb_max = kTbMax;
  double tb_min_h = 0.0;
  double tb_min_v = 0.0;

  void validate() const;
};

struct FilterResult {
  std::vector<ObservationRecord> accepted;
  std::vector<ObservationRecord> rejected;
};

/// Count of rejected records carrying each flag (a record may carry several).
struct FlagHistogram {
  std::size_t max_exceeded = 0;
  std::size_t min_violated = 0;
  std::size_t pol_order_violated = 0;

  static FlagHistogram of(std::span<const ObservationRecord> rejected);
};

enum class Statistic { Median, Mean, P25, P75 };

Statistic parse_statistic(std::string_view s);
std::string_view to_string(Statistic s);

struct ChannelStats {
  double mean{}, std{}, p25{}, p50{}, p75{};
};

struct SessionSummary {
  TbPair representative{};
  ChannelStats h{};
  ChannelStats v{};
  std::size_t n_total = 0;
  std::size_t n_accepted = 0;
};

TbPair calibrate_voltage(const RawSample& sample, const CalibrationParams& cal);

/// Forward model evaluated at sm = 1 m³/m³: the lowest physically reachable
/// brightness temperatures for the site.
TbPair min_threshold(const SurfaceConfig& surface, double t_e, double tau_nadir = 0.0,
                     DielectricModel model = DielectricModel::Mironov);

FilterThresholds thresholds_for(const SurfaceConfig& surface, double t_e, double tau_nadir = 0.0);

/// Evaluates the three screening predicates; returns the violated flags.
unsigned quality_check(const TbPair& tb, const FilterThresholds& thresholds);

FilterResult filter_tb(std::span<const ObservationRecord> series,
                       const FilterThresholds& thresholds);

/// Percentile by linear interpolation between closest ranks on a sorted
/// sample; p in [0, 1].
double percentile_sorted(std::span<const double> sorted, double p);

TbPair representative(std::span<const ObservationRecord> accepted,
                      Statistic statistic = Statistic::Median);

SessionSummary session_stats(std::span<const ObservationRecord> accepted,
                             std::optional<std::size_t> n_total = std::nullopt,
                             Statistic statistic = Statistic::Median);

/// Session file with header `timestamp,tb_h,tb_v` or `timestamp,v_h,v_v`.
/// Voltage sessions are calibrated with `cal` (identity when absent). The
/// first `skip_leading` rows are dropped.
std::vector<ObservationRecord> read_session(std::istream& in, const std::string& source,
                                            const std::optional<CalibrationParams>& cal = {},
                                            std::size_t skip_leading = 0);
std::vector<ObservationRecord> read_session_file(const std::filesystem::path& path,
                                                 const std::optional<CalibrationParams>& cal = {},
                                                 std::size_t skip_leading = 0);
std::vector<RawSample> read_raw_session(std::istream& in, const std::string& source);

/// Shortest round-trip decimal form, so piped stages see identical doubles.
std::string exact(double v);

void write_records(std::ostream& out, std::span<const ObservationRecord> records,
                   bool with_flags = false);

/// Midpoint of the first and last timestamps.
double session_time(std::span<const ObservationRecord> records);

}  // namespace tauomega
