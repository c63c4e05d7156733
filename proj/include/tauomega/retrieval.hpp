#pragma once

// Soil-moisture inversion of the tau-omega model: single-channel (SCA),
// dual-channel (DCA) and regularised dual-channel (RDCA) cost functions.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "tauomega/optimize.hpp"
#include "tauomega/radiative.hpp"
#include "tauomega/surface.hpp"
#include "tauomega/types.hpp"

namespace tauomega {

enum class AlgorithmKind { SCAV, SCAH, RDCA, DCA0, DCA1, DCA2 };
enum class TeSource { MeasuredTs, Constant292_15 };
enum class TauSource { NdviEstimated, Retrieved, Zero };

inline constexpr double kConstantTe = 292.15;
inline constexpr double kDefaultLambda = 20.0;

std::string_view to_string(AlgorithmKind k);
AlgorithmKind parse_kind(std::string_view s);

struct AlgorithmConfig {
  AlgorithmKind kind = AlgorithmKind::DCA1;
  double h = 0.0;
  double omega = 0.0;
  TeSource t_e_source = TeSource::Constant292_15;
  TauSource tau_source = TauSource::Retrieved;
  DielectricModel dielectric = DielectricModel::Mironov;
  double lambda = kDefaultLambda;  // RDCA only

  bool single_channel() const {
    return kind == AlgorithmKind::SCAV || kind == AlgorithmKind::SCAH;
  }
  Polarization polarization() const {
    return kind == AlgorithmKind::SCAH ? Polarization::H : Polarization::V;
  }
  /// Throws DomainError when fields contradict the algorithm kind.
  void validate() const;
};

/// A named configuration whose h and omega may depend on the site land cover.
struct AlgorithmPreset {
  std::string name;
  AlgorithmKind kind = AlgorithmKind::DCA1;
  std::map<std::string, double> h_by_cover;      // "" is the fallback entry
  std::map<std::string, double> omega_by_cover;  // "" is the fallback entry
  TeSource t_e_source = TeSource::Constant292_15;
  TauSource tau_source = TauSource::Retrieved;
  DielectricModel dielectric = DielectricModel::Mironov;
  double lambda = kDefaultLambda;
  std::string description;

  AlgorithmConfig resolve(const std::string& land_cover) const;

  static AlgorithmPreset parse(std::istream& in, const std::string& source);
  static AlgorithmPreset load(const std::filesystem::path& path);
  /// Canonical key-value text; parse(to_text()) reproduces the preset.
  std::string to_text() const;
};

inline constexpr std::array<std::string_view, 6> kPresetNames{"SCAV", "SCAH", "RDCA",
                                                              "DCA0", "DCA1", "DCA2"};

const AlgorithmPreset& builtin_preset(std::string_view name);
bool is_builtin_preset(std::string_view name);
/// A shipped name, or otherwise a path to a preset file.
AlgorithmPreset find_preset(const std::string& name_or_path);

struct SearchBounds {
  optimize::Interval sm{0.01, 0.70};
  optimize::Interval tau{0.0, 3.0};
};

inline constexpr double kSmTolerance = 1e-5;
inline constexpr double kTauTolerance = 1e-4;

struct RetrievalResult {
  double sm = 0.0;
  std::optional<double> tau;  // set when tau is retrieved
  double cost = 0.0;          // K²
  bool converged = false;
  bool boundary_hit = false;
  std::size_t evaluations = 0;
};

/// Model brightness temperatures for a trial (sm, tau) under `config`.
TbPair simulate(double sm, double tau, const AlgorithmConfig& config,
                const SurfaceConfig& surface, double t_e);

double cost_sca(double sm, double tb_obs_p, Polarization polarization, double tau,
                const AlgorithmConfig& config, const SurfaceConfig& surface, double t_e);

double cost_dca(double sm, double tau, const TbPair& tb_obs, const AlgorithmConfig& config,
                const SurfaceConfig& surface, double t_e);

double cost_rdca(double sm, double tau, const TbPair& tb_obs, const AlgorithmConfig& config,
                 const SurfaceConfig& surface, double t_e, double tau_sca);

/// Cost selected by the configuration kind; tau is ignored for the
/// single-channel kinds (their tau comes from tau_sca).
double cost(double sm, double tau, const TbPair& tb_obs, const AlgorithmConfig& config,
            const SurfaceConfig& surface, double t_e, std::optional<double> tau_sca);

RetrievalResult retrieve(const TbPair& tb_obs, const AlgorithmConfig& config,
                         const SurfaceConfig& surface, double t_e,
                         std::optional<double> tau_sca = std::nullopt,
                         const SearchBounds& bounds = {});

/// Effective temperature for a configuration: measured soil temperature or
/// the 292.15 K constant.
double resolve_te(const AlgorithmConfig& config, std::optional<double> measured_ts);

}  // namespace tauomega
