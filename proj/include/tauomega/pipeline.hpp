#pragma once

// Campaign orchestration: calibrate -> filter -> representative -> retrieve
// -> metrics, with CSV reports and plot-ready series.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tauomega/ancillary.hpp"
#include "tauomega/preprocess.hpp"
#include "tauomega/retrieval.hpp"
#include "tauomega/surface.hpp"
#include "tauomega/validation.hpp"

namespace tauomega {

struct SiteConfig {
  std::string name;
  SurfaceConfig surface;
  std::filesystem::path reference;
  std::vector<std::filesystem::path> sessions;
  std::optional<std::filesystem::path> reflectance;
};

/// Flat key-value campaign description; see README for the key list.
struct CampaignConfig {
  std::vector<SiteConfig> sites;  // sorted by name
  std::vector<AlgorithmPreset> presets;  // sorted by name
  std::optional<CalibrationParams> calibration;
  TauCoefficientTable tau_coefficients = TauCoefficientTable::defaults();
  std::filesystem::path output_dir = "out";
  Statistic statistic = Statistic::Median;
  std::size_t skip_leading = 0;
  double pair_window_s = kDefaultPairWindowS;

  /// Relative paths resolve against the config file's directory. Every
  /// referenced file must exist.
  static CampaignConfig load(const std::filesystem::path& path);
};

/// Per-session ancillary state shared by all presets.
struct SessionContext {
  double timestamp{};
  std::optional<double> measured_ts;
  std::optional<double> sm_ref;
  std::optional<double> sm_ref_std;
  std::optional<double> tau_sca;
};

/// NDVI-based nadir opacity for `land_cover` on the day containing `timestamp`.
/// Without an NDVI series, classes whose b is zero give 0 and others give none.
std::optional<double> tau_sca_for(const std::string& land_cover, const TauCoefficientTable& table,
                                  const NdviSeries* ndvi_series, double timestamp);

/// Reference and NDVI series of one site, loaded once per run.
struct SiteAncillary {
  std::vector<ReferenceRecord> references;
  std::optional<NdviSeries> ndvi;

  static SiteAncillary load(const SiteConfig& site);
  /// Ancillary state for a session centred on `timestamp`.
  SessionContext context(const SiteConfig& site, const TauCoefficientTable& table,
                         double timestamp, double pair_window_s) const;
};

/// `timestamp,preset,sm,tau,cost,converged,boundary_hit,evaluations`
std::string retrieval_header();
std::string retrieval_fields(double timestamp, const std::string& preset,
                             const RetrievalResult& r);

struct PipelineSummary {
  std::size_t sessions = 0;
  std::size_t failed_sessions = 0;
  std::size_t retrievals = 0;
  std::size_t failed_retrievals = 0;
};

PipelineSummary run_pipeline(const CampaignConfig& config, std::ostream& log);

struct SyntheticOptions {
  std::uint64_t seed = 42;
  std::size_t samples_per_session = 420;
  std::size_t sessions_per_site = 4;
};

/// Writes a forward-generated campaign (config, sessions with injected
/// outliers, references, reflectance, truth table) into `dir`.
void write_synthetic_campaign(const std::filesystem::path& dir, const SyntheticOptions& options);

}  // namespace tauomega
