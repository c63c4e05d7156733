#include "tauomega/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <Eigen/Core>

#include "tauomega/io.hpp"
#include "tauomega/radiative.hpp"

namespace tauomega {

void SurfaceConfig::validate() const {
  if (!(clay_fraction >= 0 && clay_fraction <= 1))
    throw DomainError("clay_fraction", "must lie in [0, 1]");
  if (!(incidence_deg >= 0 && incidence_deg < 90))
    throw DomainError("incidence_deg", "must lie in [0, 90)");
  if (!(h >= 0)) throw DomainError("h", "must be >= 0");
  if (!(omega >= 0 && omega < 1)) throw DomainError("omega", "must lie in [0, 1)");
}

SurfaceConfig SurfaceConfig::for_land_cover(const std::string& land_cover, double clay_fraction,
                                            double incidence_deg) {
  SurfaceConfig s;
  s.land_cover = land_cover;
  s.clay_fraction = clay_fraction;
  s.incidence_deg = incidence_deg;
  if (land_cover == "bare_soil") {
    s.h = 0.15;
    s.omega = 0.0;
  } else if (land_cover == "grassland") {
    s.h = 0.156;
    s.omega = 0.05;
  } else {
    s.h = 0.0;
    s.omega = 0.0;
  }
  return s;
}

void CalibrationParams::validate() const {
  if (gain_h == 0 || !std::isfinite(gain_h)) throw DomainError("gain_h", "must be finite and nonzero");
  if (gain_v == 0 || !std::isfinite(gain_v)) throw DomainError("gain_v", "must be finite and nonzero");
  if (!std::isfinite(offset_h)) throw DomainError("offset_h", "must be finite");
  if (!std::isfinite(offset_v)) throw DomainError("offset_v", "must be finite");
}

void FilterThresholds::validate() const {
  if (!(tb_min_h < tb_max)) throw DomainError("tb_min_h", "must be below tb_max");
  if (!(tb_min_v < tb_max)) throw DomainError("tb_min_v", "must be below tb_max");
}

std::string_view flag_name(QualityFlag f) {
  switch (f) {
    case kMaxExceeded: return "MaxExceeded";
    case kMinViolated: return "MinViolated";
    case kPolOrderViolated: return "PolOrderViolated";
  }
  return "?";
}

std::string flags_to_string(unsigned flags) {
  std::string out;
  for (auto f : kAllQualityFlags) {
    if (!(flags & f)) continue;
    if (!out.empty()) out += '|';
    out += flag_name(f);
  }
  return out;
}

FlagHistogram FlagHistogram::of(std::span<const ObservationRecord> rejected) {
  FlagHistogram h;
  for (const auto& r : rejected) {
    h.max_exceeded += (r.quality_flags & kMaxExceeded) ? 1 : 0;
    h.min_violated += (r.quality_flags & kMinViolated) ? 1 : 0;
    h.pol_order_violated += (r.quality_flags & kPolOrderViolated) ? 1 : 0;
  }
  return h;
}

Statistic parse_statistic(std::string_view s) {
  if (s == "median") return Statistic::Median;
  if (s == "mean") return Statistic::Mean;
  if (s == "p25") return Statistic::P25;
  if (s == "p75") return Statistic::P75;
  throw DataError("unknown statistic '" + std::string(s) + "' (median|mean|p25|p75)");
}

std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::Median: return "median";
    case Statistic::Mean: return "mean";
    case Statistic::P25: return "p25";
    case Statistic::P75: return "p75";
  }
  return "?";
}

TbPair calibrate_voltage(const RawSample& sample, const CalibrationParams& cal) {
  cal.validate();
  return {cal.gain_h * sample.v_h + cal.offset_h, cal.gain_v * sample.v_v + cal.offset_v};
}

TbPair min_threshold(const SurfaceConfig& surface, double t_e, double tau_nadir,
                     DielectricModel model) {
  surface.validate();
  const SoilState soil{1.0, surface.clay_fraction, t_e};
  return forward_tb(soil, VegetationState{tau_nadir, surface.omega}, SurfaceRoughness{surface.h},
                    surface.geometry(), t_e, model);
}

FilterThresholds thresholds_for(const SurfaceConfig& surface, double t_e, double tau_nadir) {
  const auto floor = min_threshold(surface, t_e, tau_nadir);
  FilterThresholds t{kTbMax, floor.tb_h, floor.tb_v};
  t.validate();
  return t;
}

unsigned quality_check(const TbPair& tb, const FilterThresholds& t) {
  unsigned flags = 0;
  if (!(tb.tb_h <= t.tb_max && tb.tb_v <= t.tb_max)) flags |= kMaxExceeded;
  if (!(tb.tb_h >= t.tb_min_h && tb.tb_v >= t.tb_min_v)) flags |= kMinViolated;
  if (!(tb.tb_v > tb.tb_h)) flags |= kPolOrderViolated;
  return flags;
}

FilterResult filter_tb(std::span<const ObservationRecord> series,
                       const FilterThresholds& thresholds) {
  thresholds.validate();
  FilterResult result;
  for (auto record : series) {
    record.quality_flags = quality_check(record.tb, thresholds);
    (record.quality_flags == 0 ? result.accepted : result.rejected).push_back(record);
  }
  return result;
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("series", "empty");
  if (!(p >= 0 && p <= 1)) throw DomainError("p", "must lie in [0, 1]");
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace {

Eigen::ArrayXd channel(std::span<const ObservationRecord> records, Polarization p) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = records[i].tb[p];
  return out;
}

ChannelStats channel_stats(Eigen::ArrayXd x) {
  std::sort(x.begin(), x.end());
  ChannelStats s;
  // Sorted order makes the sum independent of input permutation.
  s.mean = x.mean();
  s.std = std::sqrt((x - s.mean).square().mean());
  const std::span<const double> sorted(x.data(), static_cast<std::size_t>(x.size()));
  s.p25 = percentile_sorted(sorted, 0.25);
  s.p50 = percentile_sorted(sorted, 0.50);
  s.p75 = percentile_sorted(sorted, 0.75);
  return s;
}

double pick(const ChannelStats& s, Statistic statistic) {
  switch (statistic) {
    case Statistic::Median: return s.p50;
    case Statistic::Mean: return s.mean;
    case Statistic::P25: return s.p25;
    case Statistic::P75: return s.p75;
  }
  return s.p50;
}

}  // namespace

TbPair representative(std::span<const ObservationRecord> accepted, Statistic statistic) {
  if (accepted.empty()) throw DataError("no valid observations in session");
  const auto h = channel_stats(channel(accepted, Polarization::H));
  const auto v = channel_stats(channel(accepted, Polarization::V));
  return {pick(h, statistic), pick(v, statistic)};
}

SessionSummary session_stats(std::span<const ObservationRecord> accepted,
                             std::optional<std::size_t> n_total, Statistic statistic) {
  if (accepted.empty()) throw DataError("no valid observations in session");
  SessionSummary s;
  s.h = channel_stats(channel(accepted, Polarization::H));
  s.v = channel_stats(channel(accepted, Polarization::V));
  s.representative = {pick(s.h, statistic), pick(s.v, statistic)};
  s.n_accepted = accepted.size();
  s.n_total = n_total.value_or(accepted.size());
  return s;
}

std::vector<RawSample> read_raw_session(std::istream& in, const std::string& source) {
  const auto table = io::read_csv(in, source);
  const auto t = table.column("timestamp");
  const auto vh = table.column("v_h");
  const auto vv = table.column("v_v");
  std::vector<RawSample> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    RawSample s{table.timestamp(i, t), table.number(i, vh), table.number(i, vv)};
    if (!out.empty() && !(s.timestamp > out.back().timestamp))
      throw DataError(table.where(i) + ": timestamps must be strictly increasing");
    out.push_back(s);
  }
  return out;
}

std::vector<ObservationRecord> read_session(std::istream& in, const std::string& source,
                                            const std::optional<CalibrationParams>& cal,
                                            std::size_t skip_leading) {
  const auto table = io::read_csv(in, source);
  const auto t = table.column("timestamp");
  std::vector<ObservationRecord> out;
  out.reserve(table.rows.size());

  const bool voltage = table.find_column("v_h") && table.find_column("v_v");
  const bool tb = table.find_column("tb_h") && table.find_column("tb_v");
  if (!voltage && !tb)
    throw DataError(source + ":1: expected header timestamp,tb_h,tb_v or timestamp,v_h,v_v");
  const auto ch = table.column(tb ? "tb_h" : "v_h");
  const auto cv = table.column(tb ? "tb_v" : "v_v");
  const CalibrationParams calibration = cal.value_or(CalibrationParams{});

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ObservationRecord r;
    r.timestamp = table.timestamp(i, t);
    const double a = table.number(i, ch);
    const double b = table.number(i, cv);
    r.tb = tb ? TbPair{a, b} : calibrate_voltage(RawSample{r.timestamp, a, b}, calibration);
    if (!out.empty() && !(r.timestamp > out.back().timestamp))
      throw DataError(table.where(i) + ": timestamps must be strictly increasing");
    out.push_back(r);
  }
  const auto skip = std::min(skip_leading, out.size());
  out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(skip));
  return out;
}

std::vector<ObservationRecord> read_session_file(const std::filesystem::path& path,
                                                 const std::optional<CalibrationParams>& cal,
                                                 std::size_t skip_leading) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return read_session(in, path.string(), cal, skip_leading);
}

std::string exact(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_records(std::ostream& out, std::span<const ObservationRecord> records,
                   bool with_flags) {
  out << "timestamp,tb_h,tb_v" << (with_flags ? ",flags" : "") << '\n';
  for (const auto& r : records) {
    out << io::format_iso8601(r.timestamp) << ',' << exact(r.tb.tb_h) << ',' << exact(r.tb.tb_v);
    if (with_flags) out << ',' << flags_to_string(r.quality_flags);
    out << '\n';
  }
}

double session_time(std::span<const ObservationRecord> records) {
  if (records.empty()) throw DataError("empty session");
  return (records.front().timestamp + records.back().timestamp) / 2;
}

}  // namespace tauomega
