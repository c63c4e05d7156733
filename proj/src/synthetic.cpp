#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tauomega/io.hpp"
#include "tauomega/pipeline.hpp"

namespace tauomega {

namespace fs = std::filesystem;

namespace {

constexpr double kNoiseK = 0.5;
constexpr double kOutlierRate = 0.02;
constexpr std::size_t kBelowFloor = 3;
constexpr double kGainH = 2.0, kGainV = 2.1, kOffsetH = 10.0, kOffsetV = 12.0;

enum class Kind { Valid, Hot, Inverted, Cold };

struct SiteSpec {
  std::string name;
  std::string land_cover;
  std::optional<double> h, omega;  // site overrides
  const char* generator;           // preset whose parameters produce the TBs
  std::vector<double> sm;
  std::vector<double> tau;  // empty: tau_sca
  std::vector<double> ts;   // reference soil temperature
  bool voltage = false;
  std::string matching;
};

double pick(const std::vector<double>& v, std::size_t i) { return v[i % v.size()]; }

std::vector<SiteSpec> site_specs() {
  return {
      {"bare", "bare_soil", {}, {}, "SCAV", {0.12, 0.21, 0.30, 0.38}, {0.0},
       {286.4, 289.9, 293.1, 297.6}, false, "SCAH;SCAV"},
      {"grass", "grassland", {}, {}, "RDCA", {0.35, 0.28, 0.22, 0.18}, {},
       {284.2, 287.5, 290.8, 295.3}, false, "RDCA"},
      {"plot", "bare_soil", 0.0, 0.0, "DCA1", {0.10, 0.25, 0.33, 0.45}, {0.05, 0.10, 0.15, 0.20},
       {292.15}, false, "DCA1;DCA2"},
      {"topp", "bare_soil", 0.0, 0.0, "DCA0", {0.08, 0.17, 0.26, 0.35}, {0.02, 0.08, 0.12, 0.18},
       {288.0, 291.0, 294.0, 297.0}, true, "DCA0"},
  };
}

// NDVI knots for the vegetated site, one per week.
const std::vector<std::pair<std::string, double>> kNdviKnots{
    {"2021-11-04", 0.55}, {"2021-11-11", 0.50}, {"2021-11-20", 0.45}, {"2021-11-27", 0.40}};
constexpr double kNir = 0.32;

void write(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  io::write_file_atomic(path, text);
}

}  // namespace

void write_synthetic_campaign(const fs::path& dir, const SyntheticOptions& options) {
  if (options.samples_per_session < 2) throw DomainError("samples_per_session", "must be >= 2");
  if (options.sessions_per_site == 0) throw DomainError("sessions_per_site", "must be >= 1");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, kNoiseK);
  std::uniform_real_distribution<double> excess(1.0, 30.0);

  const auto table = TauCoefficientTable::defaults();
  std::ostringstream coeffs;
  for (const auto& [cover, c] : table.entries())
    coeffs << cover << ".b = " << exact(c.b) << '\n'
           << cover << ".vwc_c0 = " << exact(c.vwc_c0) << '\n'
           << cover << ".vwc_c1 = " << exact(c.vwc_c1) << '\n'
           << cover << ".vwc_c2 = " << exact(c.vwc_c2) << '\n'
           << cover << ".ndvi_floor = " << exact(c.ndvi_floor) << '\n';
  write(dir / "tau_coefficients.txt", coeffs.str());

  std::vector<ReflectanceSample> reflectance;
  std::ostringstream refl_csv;
  refl_csv << "date,red,nir\n";
  for (const auto& [date, value] : kNdviKnots) {
    const double red = kNir * (1 - value) / (1 + value);
    reflectance.push_back({*io::parse_date(date), red, kNir});
    refl_csv << date << ',' << exact(red) << ',' << exact(kNir) << '\n';
  }
  write(dir / "reflectance" / "grass.csv", refl_csv.str());
  const auto ndvi_series = daily_ndvi(reflectance);

  std::ostringstream config, truth;
  config << "# synthetic campaign, seed " << options.seed << "\n"
         << "output = out\n"
         << "presets = DCA0,DCA1,DCA2,RDCA,SCAH,SCAV\n"
         << "tau_coefficients = tau_coefficients.txt\n"
         << "statistic = median\n\n"
         << "[calibration]\n"
         << "gain_h = " << exact(kGainH) << "\ngain_v = " << exact(kGainV)
         << "\noffset_h = " << exact(kOffsetH) << "\noffset_v = " << exact(kOffsetV) << "\n";
  truth << "site,session,timestamp,sm,tau,t_e,matching_presets\n";

  const double first_day = *io::parse_date(kNdviKnots.front().first);
  for (const auto& spec : site_specs()) {
    SurfaceConfig surface = SurfaceConfig::for_land_cover(spec.land_cover, 0.2);
    if (spec.h) surface.h = *spec.h;
    if (spec.omega) surface.omega = *spec.omega;
    const auto generator = builtin_preset(spec.generator).resolve(spec.land_cover);

    std::vector<std::pair<double, std::string>> ref_rows;
    std::vector<std::string> session_paths;

    const bool extra_inverted = spec.land_cover == "grassland";
    const std::size_t n_sessions = options.sessions_per_site + (extra_inverted ? 1 : 0);
    for (std::size_t k = 0; k < n_sessions; ++k) {
      const bool all_inverted = extra_inverted && k == options.sessions_per_site;
      // Spread sessions over the NDVI period; the all-inverted session sits mid-way.
      const double day = all_inverted ? first_day + 11
                                      : first_day + std::round(23.0 * static_cast<double>(k) /
                                                               std::max<std::size_t>(
                                                                   1, options.sessions_per_site - 1));
      const double start = day * 86400.0 + 10 * 3600.0;

      const double sm = pick(spec.sm, k);
      const double measured = pick(spec.ts, k);
      const double t_e = resolve_te(generator, measured);
      const auto tau_sca = tau_sca_for(spec.land_cover, table, &ndvi_series, start);
      const double tau = spec.tau.empty() ? tau_sca.value_or(0.0) : pick(spec.tau, k);
      const TbPair tb = simulate(sm, tau, generator, surface, t_e);
      const auto floor = thresholds_for(surface, measured, tau_sca.value_or(0.0));

      // Valid samples come in antithetic noise pairs so the session median
      // and mean equal the noise-free value.
      const std::size_t n_valid = options.samples_per_session / 2 * 2;
      const auto n_out = static_cast<std::size_t>(
          std::lround(kOutlierRate * static_cast<double>(n_valid)));
      std::vector<Kind> kinds(n_valid, Kind::Valid);
      kinds.insert(kinds.end(), n_out, Kind::Hot);
      kinds.insert(kinds.end(), n_out, Kind::Inverted);
      kinds.insert(kinds.end(), kBelowFloor, Kind::Cold);
      std::shuffle(kinds.begin(), kinds.end(), rng);

      std::vector<ObservationRecord> records;
      double pending_h = 0, pending_v = 0;
      bool have_pending = false;
      for (std::size_t i = 0; i < kinds.size(); ++i) {
        ObservationRecord r;
        r.timestamp = start + static_cast<double>(i);
        switch (kinds[i]) {
          case Kind::Valid:
            if (!have_pending) {
              pending_h = noise(rng);
              pending_v = noise(rng);
              r.tb = {tb.tb_h + pending_h, tb.tb_v + pending_v};
            } else {
              r.tb = {tb.tb_h - pending_h, tb.tb_v - pending_v};
            }
            have_pending = !have_pending;
            break;
          case Kind::Hot:
            r.tb = {tb.tb_h + noise(rng), kTbMax + excess(rng)};
            break;
          case Kind::Inverted:
            r.tb = {tb.tb_v + noise(rng), tb.tb_h + noise(rng)};
            break;
          case Kind::Cold: {
            const double drop = excess(rng);
            r.tb = {floor.tb_min_h - drop, floor.tb_min_v - drop};
            break;
          }
        }
        if (all_inverted) r.tb = {std::max(r.tb.tb_h, r.tb.tb_v) + 1.0, std::min(r.tb.tb_h, r.tb.tb_v)};
        records.push_back(r);
      }

      const std::string session = spec.name + "_" + std::to_string(k + 1);
      std::ostringstream csv;
      if (spec.voltage) {
        csv << "timestamp,v_h,v_v\n";
        for (const auto& r : records)
          csv << io::format_iso8601(r.timestamp) << ',' << exact((r.tb.tb_h - kOffsetH) / kGainH)
              << ',' << exact((r.tb.tb_v - kOffsetV) / kGainV) << '\n';
      } else {
        write_records(csv, records);
      }
      write(dir / "sessions" / (session + ".csv"), csv.str());
      session_paths.push_back("sessions/" + session + ".csv");

      const double mid = session_time(records);
      constexpr double spread = 0.01;
      std::ostringstream row;
      row << io::format_iso8601(mid);
      for (int j = -2; j <= 2; ++j) row << ',' << exact(sm + j * spread);
      row << ',' << exact(measured) << '\n';
      ref_rows.emplace_back(mid, row.str());
      if (!all_inverted)
        truth << spec.name << ',' << session << ',' << io::format_iso8601(mid) << ','
              << exact(sm) << ',' << exact(tau) << ',' << exact(t_e) << ',' << spec.matching
              << '\n';
    }
    std::sort(ref_rows.begin(), ref_rows.end());
    std::string ref_csv = "timestamp,sm_1,sm_2,sm_3,sm_4,sm_5,soil_temp_k\n";
    for (const auto& [t, row] : ref_rows) ref_csv += row;
    write(dir / "reference" / (spec.name + ".csv"), ref_csv);

    config << "\n[site." << spec.name << "]\n"
           << "land_cover = " << spec.land_cover << "\n"
           << "clay_fraction = " << exact(surface.clay_fraction) << "\n";
    if (spec.h) config << "h = " << exact(*spec.h) << "\n";
    if (spec.omega) config << "omega = " << exact(*spec.omega) << "\n";
    config << "reference = reference/" << spec.name << ".csv\n";
    if (spec.land_cover == "grassland") config << "reflectance = reflectance/grass.csv\n";
    config << "sessions = ";
    for (std::size_t i = 0; i < session_paths.size(); ++i)
      config << (i ? "," : "") << session_paths[i];
    config << "\n";
  }
  write(dir / "config.txt", config.str());
  write(dir / "truth.csv", truth.str());
}

}  // namespace tauomega
