#include "tauomega/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tauomega/io.hpp"
#include "tauomega/types.hpp"

namespace tauomega {

namespace {

Eigen::ArrayXd as_array(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double spatial_average(const ReferenceRecord& record) {
  if (record.point_sm.empty()) throw DomainError("point_sm", "empty point list");
  return as_array(record.point_sm).mean();
}

double spatial_std(const ReferenceRecord& record) {
  const double mean = spatial_average(record);
  return std::sqrt((as_array(record.point_sm) - mean).square().mean());
}

MetricsReport metrics(const Eigen::ArrayXd& obs, const Eigen::ArrayXd& ref) {
  if (obs.size() != ref.size())
    throw DomainError("series", "obs and ref lengths differ (" + std::to_string(obs.size()) +
                                    " vs " + std::to_string(ref.size()) + ")");
  if (obs.size() < 2) throw DomainError("series", "at least two pairs are required");

  MetricsReport m;
  m.n = static_cast<std::size_t>(obs.size());
  const double mean_obs = obs.mean();
  const double mean_ref = ref.mean();
  m.bias = mean_obs - mean_ref;
  const double mse = (obs - ref).square().mean();
  m.rmse = std::sqrt(mse);
  m.ubrmse = std::sqrt(std::max(0.0, mse - m.bias * m.bias));

  const Eigen::ArrayXd dev_obs = obs - mean_obs;
  const Eigen::ArrayXd dev_ref = ref - mean_ref;
  const double sd_obs = std::sqrt(dev_obs.square().mean());
  const double sd_ref = std::sqrt(dev_ref.square().mean());
  // Exact equality test: a constant series has a rounding-level spread, not zero.
  if (obs.maxCoeff() == obs.minCoeff() || ref.maxCoeff() == ref.minCoeff()) {
    m.flags |= kRZeroVariance;
  } else {
    m.r = std::clamp((dev_obs * dev_ref).mean() / (sd_obs * sd_ref), -1.0, 1.0);
  }
  if (m.n < kMinSeriesForR) m.flags |= kRShortSeries;
  return m;
}

MetricsReport metrics(std::span<const double> obs, std::span<const double> ref) {
  return metrics(Eigen::ArrayXd(Eigen::Map<const Eigen::ArrayXd>(obs.data(),
                                                                 static_cast<Eigen::Index>(obs.size()))),
                 Eigen::ArrayXd(Eigen::Map<const Eigen::ArrayXd>(ref.data(),
                                                                 static_cast<Eigen::Index>(ref.size()))));
}

std::string metrics_flags_to_string(unsigned flags) {
  std::string out;
  if (flags & kRZeroVariance) out += "RZeroVariance";
  if (flags & kRShortSeries) out += std::string(out.empty() ? "" : "|") + "RShortSeries";
  return out;
}

std::vector<ReferenceRecord> read_reference(std::istream& in, const std::string& source) {
  const auto table = io::read_csv(in, source);
  const auto t = table.column("timestamp");
  const auto temp = table.column("soil_temp_k");
  std::vector<std::size_t> sm_cols;
  for (std::size_t k = 1;; ++k) {
    auto c = table.find_column("sm_" + std::to_string(k));
    if (!c) break;
    sm_cols.push_back(*c);
  }
  if (sm_cols.empty()) throw DataError(source + ":1: expected columns sm_1..sm_k");

  std::vector<ReferenceRecord> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ReferenceRecord r;
    r.timestamp = table.timestamp(i, t);
    r.point_temperature_k = table.number(i, temp);
    if (!(r.point_temperature_k > 0))
      throw DataError(table.where(i) + ": soil_temp_k must be > 0");
    for (auto c : sm_cols) {
      const double v = table.number(i, c);
      if (!(v >= 0 && v <= 1))
        throw DataError(table.where(i) + ": " + table.header[c] + " must lie in [0, 1]");
      r.point_sm.push_back(v);
    }
    if (!out.empty() && !(r.timestamp > out.back().timestamp))
      throw DataError(table.where(i) + ": timestamps must be strictly increasing");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReferenceRecord> read_reference_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return read_reference(in, path.string());
}

std::optional<std::size_t> nearest_reference(std::span<const ReferenceRecord> refs,
                                             double timestamp, double window_s) {
  std::optional<std::size_t> best;
  double best_gap = window_s;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const double gap = std::abs(refs[i].timestamp - timestamp);
    if (gap < best_gap || (gap == best_gap && !best)) {
      best = i;
      best_gap = gap;
    }
  }
  return best;
}

PairedSeries pair_by_time(std::span<const std::pair<double, double>> observations,
                          std::span<const ReferenceRecord> refs, double window_s) {
  PairedSeries out;
  for (const auto& [t, value] : observations) {
    if (auto i = nearest_reference(refs, t, window_s)) {
      out.obs.push_back(value);
      out.ref.push_back(spatial_average(refs[*i]));
      out.timestamps.push_back(t);
    } else {
      ++out.unmatched;
    }
  }
  return out;
}

}  // namespace tauomega
