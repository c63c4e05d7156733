// tauomega: command-line front end. Each subcommand wraps one library
// operation over CSV; `run` executes a whole campaign.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "tauomega/geometry.hpp"
#include "tauomega/io.hpp"
#include "tauomega/pipeline.hpp"

using namespace tauomega;
namespace fs = std::filesystem;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Input {
  std::string path = "-";

  std::string source() const { return path == "-" ? "<stdin>" : path; }
  std::string read() const {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open");
    return {std::istreambuf_iterator<char>(in), {}};
  }
};

// Site description either from a campaign config (--config/--site) or
// from individual flags; explicit flags win over the config.
struct SiteOptions {
  std::string config;
  std::string site;
  std::string land_cover;
  std::optional<double> clay, incidence, h, omega, t_e, tau_sca;

  void add(CLI::App* cmd, bool with_ancillary = true) {
    cmd->add_option("--config", config, "campaign config file")->envname("TAUOMEGA_CONFIG");
    cmd->add_option("--site", site, "site name in the campaign config");
    cmd->add_option("--land-cover", land_cover, "bare_soil, grassland, ...");
    cmd->add_option("--clay", clay, "clay mass fraction")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--incidence", incidence, "incidence angle, deg");
    cmd->add_option("--roughness", h, "roughness parameter h");
    cmd->add_option("--omega", omega, "single-scattering albedo");
    if (with_ancillary) {
      cmd->add_option("--t-e", t_e, "measured soil temperature, K");
      cmd->add_option("--tau-sca", tau_sca, "NDVI-based nadir opacity");
    }
  }

  std::optional<CampaignConfig> campaign() const {
    if (config.empty()) {
      if (!site.empty()) throw UsageError("--site requires --config");
      return std::nullopt;
    }
    return CampaignConfig::load(config);
  }

  const SiteConfig* find_site(const std::optional<CampaignConfig>& c) const {
    if (!c || site.empty()) return nullptr;
    for (const auto& s : c->sites)
      if (s.name == site) return &s;
    throw UsageError("unknown site '" + site + "' in " + config);
  }

  SurfaceConfig surface(const SiteConfig* s) const {
    SurfaceConfig out = s ? s->surface
                          : SurfaceConfig::for_land_cover(land_cover.empty() ? "bare_soil" : land_cover,
                                                          clay.value_or(0.2));
    if (s && !land_cover.empty()) out.land_cover = land_cover;
    if (clay) out.clay_fraction = *clay;
    if (incidence) out.incidence_deg = *incidence;
    if (h) out.h = *h;
    if (omega) out.omega = *omega;
    out.validate();
    return out;
  }

  /// Session context at `timestamp`; flags override the site's ancillary data.
  SessionContext context(const std::optional<CampaignConfig>& c, const SiteConfig* s,
                         const std::optional<SiteAncillary>& anc, double timestamp) const {
    SessionContext ctx;
    ctx.timestamp = timestamp;
    if (s && anc) ctx = anc->context(*s, c->tau_coefficients, timestamp, c->pair_window_s);
    if (t_e) ctx.measured_ts = *t_e;
    if (tau_sca) ctx.tau_sca = *tau_sca;
    if (!tau_sca && !s) {
      const auto table = c ? c->tau_coefficients : TauCoefficientTable::defaults();
      ctx.tau_sca = tau_sca_for(surface(s).land_cover, table, nullptr, timestamp);
    }
    return ctx;
  }
};

AlgorithmPreset preset_or_usage(const std::string& name) {
  if (is_builtin_preset(name)) return builtin_preset(name);
  if (!fs::is_regular_file(name))
    throw UsageError("unknown preset '" + name + "' (shipped: SCAV SCAH RDCA DCA0 DCA1 DCA2, or a preset file)");
  return AlgorithmPreset::load(name);
}

std::string preset_help() {
  std::ostringstream out;
  out << "Presets (--preset NAME, or a path to a preset file):\n";
  for (auto name : kPresetNames) {
    char line[160];
    std::snprintf(line, sizeof line, "  %-5s %s\n", std::string(name).c_str(),
                  builtin_preset(name).description.c_str());
    out << line;
  }
  out << "\nExit status: 0 success, 1 data error, 2 usage error.\n"
         "TAUOMEGA_CONFIG supplies the default for --config.";
  return out.str();
}

CalibrationParams calibration_from(const std::optional<CampaignConfig>& c,
                                   const std::optional<double>& gh, const std::optional<double>& gv,
                                   const std::optional<double>& oh, const std::optional<double>& ov) {
  CalibrationParams cal = c && c->calibration ? *c->calibration : CalibrationParams{};
  if (gh) cal.gain_h = *gh;
  if (gv) cal.gain_v = *gv;
  if (oh) cal.offset_h = *oh;
  if (ov) cal.offset_v = *ov;
  cal.validate();
  return cal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L-band tau-omega soil moisture retrieval", "tauomega"};
  app.footer(preset_help());
  app.require_subcommand(1);
  app.set_version_flag("--version", "tauomega 1.0.0");

  Input input;
  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("input", input.path, "CSV input file ('-' or omitted: stdin)");
  };

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "voltages (timestamp,v_h,v_v) -> brightness temperatures");
  std::string cal_config;
  std::optional<double> gain_h, gain_v, offset_h, offset_v;
  add_input(calibrate);
  calibrate->add_option("--config", cal_config, "campaign config with a [calibration] section")
      ->envname("TAUOMEGA_CONFIG");
  calibrate->add_option("--gain-h", gain_h, "K/V");
  calibrate->add_option("--gain-v", gain_v, "K/V");
  calibrate->add_option("--offset-h", offset_h, "K");
  calibrate->add_option("--offset-v", offset_v, "K");

  // filter
  auto* filter = app.add_subcommand("filter", "quality-screen a session; annotates each record with its flags");
  SiteOptions filter_site;
  std::optional<double> tb_min_h, tb_min_v;
  double tb_max = kTbMax;
  bool accepted_only = false;
  add_input(filter);
  filter_site.add(filter);
  filter->add_option("--tb-min-h", tb_min_h, "explicit H floor, K (default: forward model at sm=1)");
  filter->add_option("--tb-min-v", tb_min_v, "explicit V floor, K");
  filter->add_option("--tb-max", tb_max, "upper bound for both channels, K")->capture_default_str();
  filter->add_flag("--accepted-only", accepted_only, "drop rejected records from the output");

  // represent
  auto* represent = app.add_subcommand("represent", "session representative TbPair from filtered records");
  std::string statistic = "median";
  add_input(represent);
  represent->add_option("--statistic", statistic, "median|mean|p25|p75")->capture_default_str()
      ->check(CLI::IsMember({"median", "mean", "p25", "p75"}));

  // retrieve
  auto* retrieve_cmd = app.add_subcommand("retrieve", "invert representative TbPairs (timestamp,tb_h,tb_v)");
  SiteOptions retrieve_site;
  std::string preset_name;
  add_input(retrieve_cmd);
  retrieve_site.add(retrieve_cmd);
  retrieve_cmd->add_option("--preset", preset_name, "algorithm preset")->required();

  // forward
  auto* forward = app.add_subcommand("forward", "forward tau-omega brightness temperatures");
  SiteOptions forward_site;
  std::string forward_preset;
  double sm = 0, tau = 0;
  std::optional<double> forward_te;
  forward_site.add(forward, false);
  forward->add_option("--preset", forward_preset, "parameter preset")->required();
  forward->add_option("--sm", sm, "volumetric soil moisture, m3/m3")->required();
  forward->add_option("--tau", tau, "nadir vegetation opacity")->capture_default_str();
  forward->add_option("--t-e", forward_te, "effective temperature for measured-Ts presets, K");

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "bias, RMSE, ubRMSE and R of paired series");
  std::string obs_col = "obs", ref_col = "ref";
  add_input(metrics_cmd);
  metrics_cmd->add_option("--obs-column", obs_col, "")->capture_default_str();
  metrics_cmd->add_option("--ref-column", ref_col, "")->capture_default_str();

  // footprint
  auto* footprint_cmd = app.add_subcommand("footprint", "3-dB ground footprint of a tilted antenna");
  double height = 0, incidence = kDefaultIncidenceDeg, beamwidth = 37.0;
  footprint_cmd->add_option("--height", height, "antenna height, m")->required();
  footprint_cmd->add_option("--incidence", incidence, "deg")->capture_default_str();
  footprint_cmd->add_option("--beamwidth", beamwidth, "full 3-dB beamwidth, deg")->capture_default_str();

  // tau
  auto* tau_cmd = app.add_subcommand("tau", "NDVI -> nadir vegetation opacity");
  std::optional<double> ndvi_value, red, nir;
  std::string reflectance, coefficients, tau_cover = "grassland";
  tau_cmd->add_option("--ndvi", ndvi_value, "NDVI value");
  tau_cmd->add_option("--red", red, "red reflectance");
  tau_cmd->add_option("--nir", nir, "near-infrared reflectance");
  tau_cmd->add_option("--reflectance", reflectance, "date,red,nir file; prints a daily series");
  tau_cmd->add_option("--land-cover", tau_cover, "")->capture_default_str();
  tau_cmd->add_option("--coefficients", coefficients, "coefficient table file");

  // run
  auto* run = app.add_subcommand("run", "execute a campaign config end to end");
  std::string run_config, run_output, run_statistic;
  run->add_option("--config", run_config, "campaign config file")
      ->envname("TAUOMEGA_CONFIG")
      ->required();
  run->add_option("--output", run_output, "output directory (overrides the config)");
  run->add_option("--statistic", run_statistic, "median|mean|p25|p75")
      ->check(CLI::IsMember({"median", "mean", "p25", "p75"}));

  // synth
  auto* synth = app.add_subcommand("synth", "write the forward-generated test campaign");
  std::string synth_output;
  SyntheticOptions synth_opt;
  synth->add_option("--output", synth_output, "target directory")->required();
  synth->add_option("--seed", synth_opt.seed, "noise seed")->capture_default_str();
  synth->add_option("--samples", synth_opt.samples_per_session, "valid samples per session")->capture_default_str();
  synth->add_option("--sessions", synth_opt.sessions_per_site, "sessions per site")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*calibrate) {
      const auto c = cal_config.empty() ? std::optional<CampaignConfig>{}
                                        : CampaignConfig::load(cal_config);
      const auto cal = calibration_from(c, gain_h, gain_v, offset_h, offset_v);
      std::istringstream in(input.read());
      std::vector<ObservationRecord> records;
      for (const auto& s : read_raw_session(in, input.source()))
        records.push_back({s.timestamp, calibrate_voltage(s, cal), 0});
      write_records(std::cout, records);
    } else if (*filter) {
      const auto c = filter_site.campaign();
      const auto* site = filter_site.find_site(c);
      std::istringstream in(input.read());
      const auto records = read_session(in, input.source(), c ? c->calibration : std::nullopt,
                                        c ? c->skip_leading : 0);
      if (records.empty()) throw DataError(input.source() + ": empty session");
      FilterThresholds t;
      t.tb_max = tb_max;
      if (tb_min_h && tb_min_v) {
        t.tb_min_h = *tb_min_h;
        t.tb_min_v = *tb_min_v;
      } else if (tb_min_h || tb_min_v) {
        throw UsageError("--tb-min-h and --tb-min-v must be given together");
      } else {
        std::optional<SiteAncillary> anc;
        if (site) anc = SiteAncillary::load(*site);
        const auto ctx = filter_site.context(c, site, anc, session_time(records));
        const auto floor = thresholds_for(filter_site.surface(site),
                                          ctx.measured_ts.value_or(kConstantTe),
                                          ctx.tau_sca.value_or(0.0));
        t.tb_min_h = floor.tb_min_h;
        t.tb_min_v = floor.tb_min_v;
      }
      t.validate();
      std::vector<ObservationRecord> out;
      FlagHistogram hist;
      std::size_t accepted = 0;
      for (auto r : records) {
        r.quality_flags = quality_check(r.tb, t);
        if (r.quality_flags == 0) ++accepted;
        if (r.quality_flags == 0 || !accepted_only) out.push_back(r);
      }
      std::vector<ObservationRecord> rejected;
      for (const auto& r : records)
        if (quality_check(r.tb, t)) rejected.push_back({r.timestamp, r.tb, quality_check(r.tb, t)});
      hist = FlagHistogram::of(rejected);
      write_records(std::cout, out, !accepted_only);
      std::cerr << records.size() << " records, " << accepted << " accepted; floor H "
                << io::fixed(t.tb_min_h, 3) << " K, V " << io::fixed(t.tb_min_v, 3)
                << " K; MaxExceeded " << hist.max_exceeded << ", MinViolated "
                << hist.min_violated << ", PolOrderViolated " << hist.pol_order_violated << '\n';
    } else if (*represent) {
      const std::string text = input.read();
      std::istringstream in(text);
      const auto table = io::read_csv(in, input.source());
      std::istringstream again(text);
      const auto records = read_session(again, input.source());
      const auto flags = table.find_column("flags");
      std::vector<ObservationRecord> accepted;
      for (std::size_t i = 0; i < records.size(); ++i)
        if (!flags || table.text(i, *flags).empty()) accepted.push_back(records[i]);
      if (records.empty()) throw DataError(input.source() + ": empty session");
      const auto summary = session_stats(accepted, records.size(), parse_statistic(statistic));
      std::cout << "timestamp,tb_h,tb_v,n_total,n_accepted\n"
                << io::format_iso8601(session_time(records)) << ','
                << exact(summary.representative.tb_h) << ',' << exact(summary.representative.tb_v)
                << ',' << summary.n_total << ',' << summary.n_accepted << '\n';
    } else if (*retrieve_cmd) {
      const auto preset = preset_or_usage(preset_name);
      const auto c = retrieve_site.campaign();
      const auto* site = retrieve_site.find_site(c);
      const auto surface = retrieve_site.surface(site);
      const auto cfg = preset.resolve(surface.land_cover);
      std::optional<SiteAncillary> anc;
      if (site) anc = SiteAncillary::load(*site);
      std::istringstream in(input.read());
      const auto table = io::read_csv(in, input.source());
      const auto ct = table.column("timestamp");
      const auto ch = table.column("tb_h");
      const auto cv = table.column("tb_v");
      std::cout << retrieval_header() << '\n';
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double ts = table.timestamp(i, ct);
        const TbPair tb{table.number(i, ch), table.number(i, cv)};
        const auto ctx = retrieve_site.context(c, site, anc, ts);
        const auto r = tauomega::retrieve(tb, cfg, surface, resolve_te(cfg, ctx.measured_ts),
                                          ctx.tau_sca);
        std::cout << retrieval_fields(ts, preset.name, r) << '\n';
      }
    } else if (*forward) {
      const auto preset = preset_or_usage(forward_preset);
      const auto c = forward_site.campaign();
      const auto surface = forward_site.surface(forward_site.find_site(c));
      const auto cfg = preset.resolve(surface.land_cover);
      const double t_e = resolve_te(cfg, forward_te);
      const auto tb = simulate(sm, tau, cfg, surface, t_e);
      std::cout << "tb_h,tb_v\n" << exact(tb.tb_h) << ',' << exact(tb.tb_v) << '\n';
    } else if (*metrics_cmd) {
      std::istringstream in(input.read());
      const auto table = io::read_csv(in, input.source());
      const auto co = table.column(obs_col);
      const auto cr = table.column(ref_col);
      Eigen::ArrayXd obs(table.rows.size()), ref(table.rows.size());
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        obs[static_cast<Eigen::Index>(i)] = table.number(i, co);
        ref[static_cast<Eigen::Index>(i)] = table.number(i, cr);
      }
      const auto m = metrics(obs, ref);
      std::cout << "n,bias,rmse,ubrmse,r,flags\n"
                << m.n << ',' << io::fixed(m.bias) << ',' << io::fixed(m.rmse) << ','
                << io::fixed(m.ubrmse) << ',' << (m.r ? io::fixed(*m.r) : "") << ','
                << metrics_flags_to_string(m.flags) << '\n';
    } else if (*footprint_cmd) {
      const auto f = tauomega::footprint(height, incidence, beamwidth);
      std::cout << "major_m,minor_m,center_offset_m,area_m2\n"
                << io::fixed(f.major_axis_m, 4) << ',' << io::fixed(f.minor_axis_m, 4) << ','
                << io::fixed(f.center_offset_m, 4) << ',' << io::fixed(f.area_m2(), 4) << '\n';
    } else if (*tau_cmd) {
      const auto table = coefficients.empty() ? TauCoefficientTable::defaults()
                                              : TauCoefficientTable::load(coefficients);
      const auto& coeffs = table.at(tau_cover);
      if (!reflectance.empty()) {
        const auto series = daily_ndvi(read_reflectance_file(reflectance));
        std::cout << "date,ndvi,tau\n";
        for (int d = series.first_day(); d <= series.last_day(); ++d) {
          const auto t = ndvi_to_tau(series.at(d), coeffs);
          std::cout << io::format_date(d) << ',' << io::fixed(series.at(d)) << ','
                    << io::fixed(t.tau) << '\n';
        }
      } else {
        double n;
        if (ndvi_value) n = *ndvi_value;
        else if (red && nir) n = tauomega::ndvi(*red, *nir);
        else throw UsageError("tau needs --ndvi, --red with --nir, or --reflectance");
        const auto t = ndvi_to_tau(n, coeffs);
        std::cout << "ndvi,tau,clamped\n"
                  << io::fixed(n) << ',' << io::fixed(t.tau) << ',' << (t.clamped ? 1 : 0) << '\n';
      }
    } else if (*run) {
      auto c = CampaignConfig::load(run_config);
      if (!run_output.empty()) c.output_dir = run_output;
      if (!run_statistic.empty()) c.statistic = parse_statistic(run_statistic);
      const auto s = run_pipeline(c, std::cerr);
      std::cerr << "reports written to " << c.output_dir.string() << '\n';
      (void)s;
    } else if (*synth) {
      write_synthetic_campaign(synth_output, synth_opt);
      std::cerr << "synthetic campaign written to " << synth_output << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
