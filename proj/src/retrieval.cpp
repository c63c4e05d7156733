#include "tauomega/retrieval.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tauomega/io.hpp"

namespace tauomega {

namespace {

// Shipped configurations. h and omega for the SMAP-style algorithms follow
// the land-cover look-up values; the DCA variants drop ancillary parameters.
constexpr std::string_view kBuiltinText[] = {
    R"(name = SCAV
kind = SCAV
description = single-channel V-pol; land-cover h/omega; measured Ts; NDVI tau; Mironov
h.bare_soil = 0.15
h.grassland = 0.156
omega.bare_soil = 0
omega.grassland = 0.05
t_e = measured
tau = ndvi
dielectric = mironov
lambda = 20
)",
    R"(name = SCAH
kind = SCAH
description = single-channel H-pol; land-cover h/omega; measured Ts; NDVI tau; Mironov
h.bare_soil = 0.15
h.grassland = 0.156
omega.bare_soil = 0
omega.grassland = 0.05
t_e = measured
tau = ndvi
dielectric = mironov
lambda = 20
)",
    R"(name = RDCA
kind = RDCA
description = regularised dual-channel, lambda 20; h 0.4612; measured Ts; retrieved tau; Mironov
h = 0.4612
omega.bare_soil = 0
omega.grassland = 0.0608
t_e = measured
tau = retrieved
dielectric = mironov
lambda = 20
)",
    R"(name = DCA0
kind = DCA0
description = dual-channel; h = omega = 0; 292.15 K; retrieved tau; Topp
h = 0
omega = 0
t_e = 292.15
tau = retrieved
dielectric = topp
lambda = 20
)",
    R"(name = DCA1
kind = DCA1
description = dual-channel; h = omega = 0; 292.15 K; retrieved tau; Mironov
h = 0
omega = 0
t_e = 292.15
tau = retrieved
dielectric = mironov
lambda = 20
)",
    R"(name = DCA2
kind = DCA2
description = dual-channel; h = omega = 0; measured Ts; retrieved tau; Mironov
h = 0
omega = 0
t_e = measured
tau = retrieved
dielectric = mironov
lambda = 20
)",
};

const std::map<std::string, AlgorithmPreset, std::less<>>& builtins() {
  static const auto table = [] {
    std::map<std::string, AlgorithmPreset, std::less<>> m;
    for (auto text : kBuiltinText) {
      std::istringstream in{std::string(text)};
      auto p = AlgorithmPreset::parse(in, "<builtin>");
      m.emplace(p.name, std::move(p));
    }
    return m;
  }();
  return table;
}

TeSource parse_te(const std::string& s, const std::string& where) {
  if (s == "measured") return TeSource::MeasuredTs;
  if (s == "292.15") return TeSource::Constant292_15;
  throw DataError(where + ": t_e must be 'measured' or '292.15'");
}

TauSource parse_tau(const std::string& s, const std::string& where) {
  if (s == "ndvi") return TauSource::NdviEstimated;
  if (s == "retrieved") return TauSource::Retrieved;
  if (s == "zero") return TauSource::Zero;
  throw DataError(where + ": tau must be 'ndvi', 'retrieved' or 'zero'");
}

std::string_view te_text(TeSource s) { return s == TeSource::MeasuredTs ? "measured" : "292.15"; }

std::string_view tau_text(TauSource s) {
  switch (s) {
    case TauSource::NdviEstimated: return "ndvi";
    case TauSource::Retrieved: return "retrieved";
    case TauSource::Zero: return "zero";
  }
  return "?";
}

double lookup(const std::map<std::string, double>& m, const std::string& land_cover,
              const std::string& preset, std::string_view field) {
  if (auto it = m.find(land_cover); it != m.end()) return it->second;
  if (auto it = m.find(""); it != m.end()) return it->second;
  throw DataError("preset " + preset + ": no " + std::string(field) + " for land cover '" +
                  land_cover + "'");
}

bool within(double x, const optimize::Interval& range, double tol) {
  return std::abs(x - range.lo) <= tol || std::abs(x - range.hi) <= tol;
}

}  // namespace

std::string_view to_string(AlgorithmKind k) {
  switch (k) {
    case AlgorithmKind::SCAV: return "SCAV";
    case AlgorithmKind::SCAH: return "SCAH";
    case AlgorithmKind::RDCA: return "RDCA";
    case AlgorithmKind::DCA0: return "DCA0";
    case AlgorithmKind::DCA1: return "DCA1";
    case AlgorithmKind::DCA2: return "DCA2";
  }
  return "?";
}

AlgorithmKind parse_kind(std::string_view s) {
  for (auto k : {AlgorithmKind::SCAV, AlgorithmKind::SCAH, AlgorithmKind::RDCA,
                 AlgorithmKind::DCA0, AlgorithmKind::DCA1, AlgorithmKind::DCA2})
    if (to_string(k) == s) return k;
  throw DataError("unknown algorithm kind '" + std::string(s) + "'");
}

void AlgorithmConfig::validate() const {
  if (!(h >= 0)) throw DomainError("h", "must be >= 0");
  if (!(omega >= 0 && omega < 1)) throw DomainError("omega", "must lie in [0, 1)");
  if (!(lambda >= 0)) throw DomainError("lambda", "must be >= 0");
  if (single_channel()) {
    if (tau_source == TauSource::Retrieved)
      throw DomainError("tau_source", "single-channel kinds take tau from NDVI, not retrieval");
  } else if (tau_source != TauSource::Retrieved) {
    throw DomainError("tau_source", "dual-channel kinds retrieve tau");
  }
  if (kind == AlgorithmKind::DCA0) {
    if (dielectric != DielectricModel::Topp)
      throw DomainError("dielectric", "DCA0 uses the Topp model");
    if (t_e_source != TeSource::Constant292_15)
      throw DomainError("t_e_source", "DCA0 uses the 292.15 K constant");
    if (h != 0 || omega != 0) throw DomainError("h", "DCA0 uses h = omega = 0");
  }
}

AlgorithmConfig AlgorithmPreset::resolve(const std::string& land_cover) const {
  AlgorithmConfig c;
  c.kind = kind;
  c.h = lookup(h_by_cover, land_cover, name, "h");
  c.omega = lookup(omega_by_cover, land_cover, name, "omega");
  c.t_e_source = t_e_source;
  c.tau_source = tau_source;
  c.dielectric = dielectric;
  c.lambda = lambda;
  c.validate();
  return c;
}

AlgorithmPreset AlgorithmPreset::parse(std::istream& in, const std::string& source) {
  const auto kv = io::KeyValueFile::parse(in, source);
  AlgorithmPreset p;
  p.kind = parse_kind(kv.require("kind"));
  p.name = kv.get("name").value_or(std::string(to_string(p.kind)));
  p.description = kv.get("description").value_or("");
  for (const auto& [key, value] : kv.values()) {
    for (auto [prefix, target] : {std::pair{"h", &p.h_by_cover}, {"omega", &p.omega_by_cover}}) {
      const std::string pre(prefix);
      if (key == pre)
        (*target)[""] = kv.number(key);
      else if (key.starts_with(pre + "."))
        (*target)[key.substr(pre.size() + 1)] = kv.number(key);
    }
  }
  if (p.h_by_cover.empty()) throw DataError(source + ": preset needs 'h' or 'h.<land_cover>'");
  if (p.omega_by_cover.empty())
    throw DataError(source + ": preset needs 'omega' or 'omega.<land_cover>'");
  p.t_e_source = parse_te(kv.require("t_e"), kv.where("t_e"));
  p.tau_source = parse_tau(kv.require("tau"), kv.where("tau"));
  p.dielectric = parse_dielectric(kv.require("dielectric"));
  p.lambda = kv.number_or("lambda", kDefaultLambda);

  static const std::set<std::string> known{"name", "kind", "description", "t_e",
                                           "tau",  "dielectric", "lambda"};
  for (const auto& [key, value] : kv.values())
    if (!known.count(key) && key != "h" && key != "omega" && !key.starts_with("h.") &&
        !key.starts_with("omega."))
      throw DataError(kv.where(key) + ": unknown preset key '" + key + "'");

  // Every land cover the preset names must resolve to a consistent config.
  std::set<std::string> covers;
  for (const auto& [cover, v] : p.h_by_cover) covers.insert(cover);
  for (const auto& [cover, v] : p.omega_by_cover) covers.insert(cover);
  for (const auto& cover : covers) {
    try {
      p.resolve(cover);
    } catch (const DomainError& e) {
      throw DataError(source + ": " + e.what());
    } catch (const DataError&) {
      // h or omega only given per land cover; nothing to check for this key
    }
  }
  return p;
}

AlgorithmPreset AlgorithmPreset::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  return parse(in, path.string());
}

std::string AlgorithmPreset::to_text() const {
  std::ostringstream out;
  out << "name = " << name << '\n' << "kind = " << to_string(kind) << '\n';
  if (!description.empty()) out << "description = " << description << '\n';
  for (auto [field, m] : {std::pair{"h", &h_by_cover}, {"omega", &omega_by_cover}})
    for (const auto& [cover, v] : *m)
      out << field << (cover.empty() ? "" : ".") << cover << " = " << io::fixed(v, 6) << '\n';
  out << "t_e = " << te_text(t_e_source) << '\n'
      << "tau = " << tau_text(tau_source) << '\n'
      << "dielectric = " << to_string(dielectric) << '\n'
      << "lambda = " << io::fixed(lambda, 6) << '\n';
  return out.str();
}

bool is_builtin_preset(std::string_view name) { return builtins().count(name) != 0; }

const AlgorithmPreset& builtin_preset(std::string_view name) {
  const auto& m = builtins();
  if (auto it = m.find(name); it != m.end()) return it->second;
  throw DataError("unknown preset '" + std::string(name) + "'");
}

AlgorithmPreset find_preset(const std::string& name_or_path) {
  if (is_builtin_preset(name_or_path)) return builtin_preset(name_or_path);
  if (std::filesystem::is_regular_file(name_or_path)) return AlgorithmPreset::load(name_or_path);
  throw DataError("unknown preset '" + name_or_path + "' (not a shipped name or a file)");
}

TbPair simulate(double sm, double tau, const AlgorithmConfig& config, const SurfaceConfig& surface,
                double t_e) {
  return forward_tb(SoilState{sm, surface.clay_fraction, t_e},
                    VegetationState{tau, config.omega}, SurfaceRoughness{config.h},
                    surface.geometry(), t_e, config.dielectric);
}

double cost_sca(double sm, double tb_obs_p, Polarization polarization, double tau,
                const AlgorithmConfig& config, const SurfaceConfig& surface, double t_e) {
  const double r = simulate(sm, tau, config, surface, t_e)[polarization] - tb_obs_p;
  return r * r;
}

double cost_dca(double sm, double tau, const TbPair& tb_obs, const AlgorithmConfig& config,
                const SurfaceConfig& surface, double t_e) {
  const auto sim = simulate(sm, tau, config, surface, t_e);
  const double rv = sim.tb_v - tb_obs.tb_v;
  const double rh = sim.tb_h - tb_obs.tb_h;
  return rv * rv + rh * rh;
}

double cost_rdca(double sm, double tau, const TbPair& tb_obs, const AlgorithmConfig& config,
                 const SurfaceConfig& surface, double t_e, double tau_sca) {
  const double d = tau - tau_sca;
  return cost_dca(sm, tau, tb_obs, config, surface, t_e) + config.lambda * config.lambda * d * d;
}

double cost(double sm, double tau, const TbPair& tb_obs, const AlgorithmConfig& config,
            const SurfaceConfig& surface, double t_e, std::optional<double> tau_sca) {
  switch (config.kind) {
    case AlgorithmKind::SCAV:
    case AlgorithmKind::SCAH: {
      const double t = config.tau_source == TauSource::Zero ? 0.0 : tau_sca.value();
      return cost_sca(sm, tb_obs[config.polarization()], config.polarization(), t, config,
                      surface, t_e);
    }
    case AlgorithmKind::RDCA: return cost_rdca(sm, tau, tb_obs, config, surface, t_e, tau_sca.value());
    default: return cost_dca(sm, tau, tb_obs, config, surface, t_e);
  }
}

RetrievalResult retrieve(const TbPair& tb_obs, const AlgorithmConfig& config,
                         const SurfaceConfig& surface, double t_e, std::optional<double> tau_sca,
                         const SearchBounds& bounds) {
  if (!tb_obs.finite()) throw DomainError("tb_obs", "brightness temperatures must be finite");
  if (!(t_e > 0) || !std::isfinite(t_e)) throw DomainError("t_e", "must be finite and > 0");
  config.validate();
  surface.validate();
  const bool needs_tau_sca = config.kind == AlgorithmKind::RDCA ||
                             (config.single_channel() && config.tau_source == TauSource::NdviEstimated);
  if (needs_tau_sca && !tau_sca)
    throw DomainError("tau_sca", "required for " + std::string(to_string(config.kind)));
  if (tau_sca && !(*tau_sca >= 0)) throw DomainError("tau_sca", "must be >= 0");

  RetrievalResult result;
  if (config.single_channel()) {
    auto f = [&](double sm) { return cost(sm, 0.0, tb_obs, config, surface, t_e, tau_sca); };
    const auto r = optimize::minimize_1d(f, bounds.sm, {64, 1e-9});
    result.sm = r.x;
    result.cost = r.f;
    result.evaluations = r.evaluations;
    result.converged = std::isfinite(r.f) && r.width < kSmTolerance;
    result.boundary_hit = within(r.x, bounds.sm, kSmTolerance);
  } else {
    auto f = [&](double sm, double tau) {
      return cost(sm, tau, tb_obs, config, surface, t_e, tau_sca);
    };
    const auto r = optimize::minimize_2d(f, bounds.sm, bounds.tau);
    result.sm = r.x[0];
    result.tau = r.x[1];
    result.cost = r.f;
    result.evaluations = r.evaluations;
    result.converged = std::isfinite(r.f) && r.width[0] < kSmTolerance && r.width[1] < kTauTolerance;
    result.boundary_hit =
        within(r.x[0], bounds.sm, kSmTolerance) || within(r.x[1], bounds.tau, kTauTolerance);
  }
  if (!std::isfinite(result.cost)) {
    result.converged = false;
    result.sm = std::clamp(std::isfinite(result.sm) ? result.sm : bounds.sm.lo, bounds.sm.lo,
                           bounds.sm.hi);
  }
  return result;
}

double resolve_te(const AlgorithmConfig& config, std::optional<double> measured_ts) {
  if (config.t_e_source == TeSource::Constant292_15) return kConstantTe;
  if (!measured_ts) throw DataError("measured soil temperature required but unavailable");
  return effective_temperature(*measured_ts, *measured_ts, 1.0);
}

}  // namespace tauomega
