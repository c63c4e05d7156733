#include "tauomega/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tauomega/io.hpp"

namespace tauomega {

namespace fs = std::filesystem;

namespace {

fs::path resolve_path(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_absolute() ? p : base / p;
}

fs::path existing(const io::KeyValueFile& kv, const std::string& key, const fs::path& base) {
  const auto p = resolve_path(base, kv.require(key));
  if (!fs::is_regular_file(p))
    throw DataError(kv.where(key) + ": '" + key + "' file not found: " + p.string());
  return p;
}

std::string opt(const std::optional<double>& v, int precision = 6) {
  return v ? io::fixed(*v, precision) : std::string();
}

int day_of(double timestamp) { return static_cast<int>(std::floor(timestamp / 86400.0)); }

struct SessionRow {
  std::string session;
  SessionContext ctx;
  std::string status = "ok";
  std::size_t n_total = 0;
  FlagHistogram histogram;
  FilterThresholds thresholds;
  std::optional<SessionSummary> summary;
  double t_e_filter = kConstantTe;
};

struct RetrievalRow {
  std::string session;
  std::string preset;
  SessionContext ctx;
  std::string status = "ok";
  std::optional<RetrievalResult> result;
  std::optional<double> t_e;
};

}  // namespace

std::optional<double> tau_sca_for(const std::string& land_cover, const TauCoefficientTable& table,
                                  const NdviSeries* ndvi_series, double timestamp) {
  if (!table.contains(land_cover)) return std::nullopt;
  const auto& coeffs = table.at(land_cover);
  if (coeffs.b == 0) return 0.0;
  if (!ndvi_series || ndvi_series->empty()) return std::nullopt;
  return ndvi_to_tau(ndvi_series->at(day_of(timestamp)), coeffs).tau;
}

SiteAncillary SiteAncillary::load(const SiteConfig& site) {
  SiteAncillary a;
  a.references = read_reference_file(site.reference);
  if (site.reflectance) a.ndvi = daily_ndvi(read_reflectance_file(*site.reflectance));
  return a;
}

SessionContext SiteAncillary::context(const SiteConfig& site, const TauCoefficientTable& table,
                                      double timestamp, double pair_window_s) const {
  SessionContext ctx;
  ctx.timestamp = timestamp;
  if (auto i = nearest_reference(references, timestamp, pair_window_s)) {
    ctx.measured_ts = references[*i].point_temperature_k;
    ctx.sm_ref = spatial_average(references[*i]);
    ctx.sm_ref_std = spatial_std(references[*i]);
  }
  ctx.tau_sca = tau_sca_for(site.surface.land_cover, table, ndvi ? &*ndvi : nullptr, timestamp);
  return ctx;
}

std::string retrieval_header() {
  return "timestamp,preset,sm,tau,cost,converged,boundary_hit,evaluations";
}

std::string retrieval_fields(double timestamp, const std::string& preset,
                             const RetrievalResult& r) {
  std::ostringstream out;
  out << io::format_iso8601(timestamp) << ',' << preset << ',' << io::fixed(r.sm) << ','
      << opt(r.tau) << ',' << io::fixed(r.cost) << ',' << (r.converged ? 1 : 0) << ','
      << (r.boundary_hit ? 1 : 0) << ',' << r.evaluations;
  return out.str();
}

CampaignConfig CampaignConfig::load(const fs::path& path) {
  const auto kv = io::KeyValueFile::load(path);
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  CampaignConfig c;

  static const std::set<std::string> top{"output", "presets", "tau_coefficients", "statistic",
                                         "pair_window_minutes", "session.skip_leading"};
  for (const auto& [key, value] : kv.values())
    if (!top.count(key) && !key.starts_with("site.") && !key.starts_with("calibration."))
      throw DataError(kv.where(key) + ": unknown key '" + key + "'");

  c.output_dir = resolve_path(base, kv.get("output").value_or("out"));
  if (auto s = kv.get("statistic")) c.statistic = parse_statistic(*s);
  c.pair_window_s = kv.number_or("pair_window_minutes", kDefaultPairWindowS / 60.0) * 60.0;
  const double skip = kv.number_or("session.skip_leading", 0);
  if (skip < 0 || skip != std::floor(skip))
    throw DataError(kv.where("session.skip_leading") + ": must be a non-negative integer");
  c.skip_leading = static_cast<std::size_t>(skip);

  if (kv.contains("tau_coefficients"))
    c.tau_coefficients = TauCoefficientTable::load(existing(kv, "tau_coefficients", base));

  if (!kv.children("calibration").empty()) {
    CalibrationParams cal;
    cal.gain_h = kv.number_or("calibration.gain_h", 1.0);
    cal.gain_v = kv.number_or("calibration.gain_v", 1.0);
    cal.offset_h = kv.number_or("calibration.offset_h", 0.0);
    cal.offset_v = kv.number_or("calibration.offset_v", 0.0);
    try {
      cal.validate();
    } catch (const DomainError& e) {
      throw DataError(kv.source() + ": calibration " + e.what());
    }
    c.calibration = cal;
  }

  const std::string preset_list =
      kv.get("presets").value_or("SCAV,SCAH,RDCA,DCA0,DCA1,DCA2");
  for (const auto& name : io::split(preset_list, ',')) {
    if (name.empty()) continue;
    if (is_builtin_preset(name)) {
      c.presets.push_back(builtin_preset(name));
    } else {
      const auto p = resolve_path(base, name);
      if (!fs::is_regular_file(p))
        throw DataError(kv.where("presets") + ": unknown preset '" + name +
                        "' (not a shipped name or a file)");
      c.presets.push_back(AlgorithmPreset::load(p));
    }
  }
  std::sort(c.presets.begin(), c.presets.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });

  for (const auto& name : kv.children("site")) {
    const std::string k = "site." + name + ".";
    SiteConfig site;
    site.name = name;
    const auto land_cover = kv.get(k + "land_cover").value_or("bare_soil");
    site.surface = SurfaceConfig::for_land_cover(land_cover, kv.number(k + "clay_fraction"),
                                                 kv.number_or(k + "incidence_deg", kDefaultIncidenceDeg));
    site.surface.h = kv.number_or(k + "h", site.surface.h);
    site.surface.omega = kv.number_or(k + "omega", site.surface.omega);
    site.surface.frequency_ghz = kv.number_or(k + "frequency_ghz", kDefaultFrequencyGhz);
    try {
      site.surface.validate();
    } catch (const DomainError& e) {
      throw DataError(kv.where(k + "clay_fraction") + ": site " + name + ": " + e.what());
    }
    site.reference = existing(kv, k + "reference", base);
    if (kv.contains(k + "reflectance")) site.reflectance = existing(kv, k + "reflectance", base);
    for (const auto& s : io::split(kv.get(k + "sessions").value_or(""), ',')) {
      if (s.empty()) continue;
      const auto p = resolve_path(base, s);
      if (!fs::is_regular_file(p))
        throw DataError(kv.where(k + "sessions") + ": session file not found: " + p.string());
      site.sessions.push_back(p);
    }
    static const std::set<std::string> site_keys{"land_cover", "clay_fraction", "incidence_deg",
                                                 "h", "omega", "frequency_ghz", "reference",
                                                 "reflectance", "sessions"};
    for (const auto& [key, value] : kv.values())
      if (key.starts_with(k) && !site_keys.count(key.substr(k.size())))
        throw DataError(kv.where(key) + ": unknown site key '" + key + "'");
    c.sites.push_back(std::move(site));
  }
  return c;
}

PipelineSummary run_pipeline(const CampaignConfig& config, std::ostream& log_out) {
  PipelineSummary summary;
  std::ostringstream log;
  fs::create_directories(config.output_dir);

  std::size_t total_sessions = 0;
  for (const auto& site : config.sites) total_sessions += site.sessions.size();
  if (total_sessions == 0) log << "warning: campaign has no sessions; writing empty reports\n";

  std::ostringstream sessions_csv, retrievals_csv, metrics_csv, metrics_txt;
  sessions_csv << "site,session,timestamp,status,n_total,n_accepted,n_max_exceeded,"
                  "n_min_violated,n_pol_order_violated,tb_min_h,tb_min_v,tau_sca,t_e,"
                  "rep_tb_h,rep_tb_v,mean_h,std_h,p25_h,p50_h,p75_h,mean_v,std_v,p25_v,p50_v,p75_v\n";
  retrievals_csv << "site,session," << retrieval_header()
                 << ",status,t_e,tau_sca,sm_ref,sm_ref_std\n";
  metrics_csv << "site,preset,n,unmatched,bias,rmse,ubrmse,r,flags\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-6s %4s %10s %10s %10s %8s  %s\n", "site", "preset",
                "n", "bias", "rmse", "ubrmse", "r", "flags");
  metrics_txt << line;

  for (const auto& site : config.sites) {
    const auto ancillary = SiteAncillary::load(site);
    const auto& refs = ancillary.references;

    std::vector<SessionRow> session_rows;
    std::map<std::string, std::vector<ObservationRecord>> accepted_by_session;
    for (const auto& path : site.sessions) {
      SessionRow row;
      row.session = path.stem().string();
      const auto records = read_session_file(path, config.calibration, config.skip_leading);
      row.n_total = records.size();
      ++summary.sessions;
      if (records.empty()) {
        row.status = "empty session";
        ++summary.failed_sessions;
        log << site.name << '/' << row.session << ": empty session, skipped\n";
        session_rows.push_back(std::move(row));
        continue;
      }
      row.ctx = ancillary.context(site, config.tau_coefficients, session_time(records),
                                  config.pair_window_s);
      row.t_e_filter = row.ctx.measured_ts.value_or(kConstantTe);
      row.thresholds = thresholds_for(site.surface, row.t_e_filter, row.ctx.tau_sca.value_or(0.0));

      auto filtered = filter_tb(records, row.thresholds);
      row.histogram = FlagHistogram::of(filtered.rejected);
      log << site.name << '/' << row.session << ": " << records.size() << " records, "
          << filtered.accepted.size() << " accepted, " << filtered.rejected.size()
          << " rejected (MaxExceeded " << row.histogram.max_exceeded << ", MinViolated "
          << row.histogram.min_violated << ", PolOrderViolated " << row.histogram.pol_order_violated
          << ")\n";
      if (filtered.accepted.empty()) {
        row.status = "no valid observations";
        ++summary.failed_sessions;
        log << site.name << '/' << row.session << ": no valid observations in session, skipped\n";
      } else {
        row.summary = session_stats(filtered.accepted, records.size(), config.statistic);
        accepted_by_session[row.session] = std::move(filtered.accepted);
      }
      session_rows.push_back(std::move(row));
    }
    std::stable_sort(session_rows.begin(), session_rows.end(), [](const auto& a, const auto& b) {
      return std::tie(a.ctx.timestamp, a.session) < std::tie(b.ctx.timestamp, b.session);
    });

    std::vector<RetrievalRow> retrieval_rows;
    for (const auto& s : session_rows) {
      const std::string ts = s.n_total ? io::format_iso8601(s.ctx.timestamp) : "";
      sessions_csv << site.name << ',' << s.session << ',' << ts << ',' << s.status << ','
                   << s.n_total << ',' << (s.summary ? s.summary->n_accepted : 0) << ','
                   << s.histogram.max_exceeded << ',' << s.histogram.min_violated << ','
                   << s.histogram.pol_order_violated << ','
                   << (s.n_total ? io::fixed(s.thresholds.tb_min_h) : "") << ','
                   << (s.n_total ? io::fixed(s.thresholds.tb_min_v) : "") << ','
                   << opt(s.ctx.tau_sca) << ',' << (s.n_total ? io::fixed(s.t_e_filter) : "");
      if (s.summary) {
        const auto& m = *s.summary;
        sessions_csv << ',' << exact(m.representative.tb_h) << ',' << exact(m.representative.tb_v);
        for (const auto* c : {&m.h, &m.v})
          sessions_csv << ',' << io::fixed(c->mean) << ',' << io::fixed(c->std) << ','
                       << io::fixed(c->p25) << ',' << io::fixed(c->p50) << ',' << io::fixed(c->p75);
      } else {
        sessions_csv << std::string(12, ',');
      }
      sessions_csv << '\n';
      if (!s.summary) continue;

      for (const auto& preset : config.presets) {
        RetrievalRow row;
        row.session = s.session;
        row.preset = preset.name;
        row.ctx = s.ctx;
        ++summary.retrievals;
        try {
          const auto cfg = preset.resolve(site.surface.land_cover);
          row.t_e = resolve_te(cfg, s.ctx.measured_ts);
          row.result = retrieve(s.summary->representative, cfg, site.surface, *row.t_e,
                                s.ctx.tau_sca);
          if (!row.result->converged) row.status = "not converged";
        } catch (const std::exception& e) {
          row.status = std::string("failed: ") + e.what();
          row.result.reset();
          ++summary.failed_retrievals;
          log << site.name << '/' << s.session << '/' << preset.name << ": " << row.status << '\n';
        }
        retrieval_rows.push_back(std::move(row));
      }
    }

    for (const auto& r : retrieval_rows) {
      retrievals_csv << site.name << ',' << r.session << ',';
      if (r.result) {
        retrievals_csv << retrieval_fields(r.ctx.timestamp, r.preset, *r.result);
      } else {
        retrievals_csv << io::format_iso8601(r.ctx.timestamp) << ',' << r.preset << ",,,,,,";
      }
      std::string status = r.status;
      std::replace(status.begin(), status.end(), ',', ';');
      retrievals_csv << ',' << status << ',' << opt(r.t_e) << ',' << opt(r.ctx.tau_sca) << ','
                     << opt(r.ctx.sm_ref) << ',' << opt(r.ctx.sm_ref_std) << '\n';
    }

    // Metrics per preset over sessions of this site.
    for (const auto& preset : config.presets) {
      std::vector<std::pair<double, double>> obs;
      for (const auto& r : retrieval_rows)
        if (r.preset == preset.name && r.result) obs.emplace_back(r.ctx.timestamp, r.result->sm);
      const auto paired = pair_by_time(obs, refs, config.pair_window_s);
      metrics_csv << site.name << ',' << preset.name << ',' << paired.obs.size() << ','
                  << paired.unmatched << ',';
      if (paired.obs.size() >= 2) {
        const auto m = metrics(paired.obs, paired.ref);
        metrics_csv << io::fixed(m.bias) << ',' << io::fixed(m.rmse) << ',' << io::fixed(m.ubrmse)
                    << ',' << opt(m.r) << ',' << metrics_flags_to_string(m.flags) << '\n';
        std::snprintf(line, sizeof line, "%-12s %-6s %4zu %10.6f %10.6f %10.6f %8s  %s\n",
                      site.name.c_str(), preset.name.c_str(), m.n, m.bias, m.rmse, m.ubrmse,
                      m.r ? io::fixed(*m.r, 3).c_str() : "-",
                      metrics_flags_to_string(m.flags).c_str());
      } else {
        metrics_csv << ",,,,InsufficientPairs\n";
        std::snprintf(line, sizeof line, "%-12s %-6s %4zu %10s %10s %10s %8s  %s\n",
                      site.name.c_str(), preset.name.c_str(), paired.obs.size(), "-", "-", "-", "-",
                      "InsufficientPairs");
      }
      metrics_txt << line;
    }

    // Plot series: representative TB statistics, and retrieved vs reference sm.
    std::ostringstream plot_tb, plot_sm;
    plot_tb << "timestamp,session,median_h,mean_h,p25_h,p75_h,median_v,mean_v,p25_v,p75_v\n";
    plot_sm << "timestamp,session,sm_ref,sm_ref_lo,sm_ref_hi";
    for (const auto& p : config.presets) plot_sm << ',' << p.name;
    plot_sm << '\n';
    for (const auto& s : session_rows) {
      if (!s.summary) continue;
      const auto& m = *s.summary;
      plot_tb << io::format_iso8601(s.ctx.timestamp) << ',' << s.session << ','
              << io::fixed(m.h.p50) << ',' << io::fixed(m.h.mean) << ',' << io::fixed(m.h.p25)
              << ',' << io::fixed(m.h.p75) << ',' << io::fixed(m.v.p50) << ','
              << io::fixed(m.v.mean) << ',' << io::fixed(m.v.p25) << ',' << io::fixed(m.v.p75)
              << '\n';
      plot_sm << io::format_iso8601(s.ctx.timestamp) << ',' << s.session << ','
              << opt(s.ctx.sm_ref) << ',';
      if (s.ctx.sm_ref && s.ctx.sm_ref_std)
        plot_sm << io::fixed(*s.ctx.sm_ref - 2 * *s.ctx.sm_ref_std) << ','
                << io::fixed(*s.ctx.sm_ref + 2 * *s.ctx.sm_ref_std);
      else
        plot_sm << ',';
      for (const auto& p : config.presets) {
        plot_sm << ',';
        for (const auto& r : retrieval_rows)
          if (r.session == s.session && r.preset == p.name && r.result)
            plot_sm << io::fixed(r.result->sm);
      }
      plot_sm << '\n';
    }
    io::write_file_atomic(config.output_dir / ("plot_tb_" + site.name + ".csv"), plot_tb.str());
    io::write_file_atomic(config.output_dir / ("plot_sm_" + site.name + ".csv"), plot_sm.str());
  }

  log << "sessions " << summary.sessions << " (failed " << summary.failed_sessions
      << "), retrievals " << summary.retrievals << " (failed " << summary.failed_retrievals
      << ")\n";
  io::write_file_atomic(config.output_dir / "sessions.csv", sessions_csv.str());
  io::write_file_atomic(config.output_dir / "retrievals.csv", retrievals_csv.str());
  io::write_file_atomic(config.output_dir / "metrics.csv", metrics_csv.str());
  io::write_file_atomic(config.output_dir / "metrics.txt", metrics_txt.str());
  io::write_file_atomic(config.output_dir / "run.log", log.str());
  log_out << log.str();
  return summary;
}

}  // namespace tauomega
