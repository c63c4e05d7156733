#pragma once

#include <string>

#include "tauomega/radiative.hpp"

namespace tauomega {

/// Per-site surface description. h and omega hold the site defaults for its
/// land cover; algorithm presets may override them.
struct SurfaceConfig {
  double clay_fraction = 0.2;
  std::string land_cover = "bare_soil";
  double incidence_deg = kDefaultIncidenceDeg;
  double frequency_ghz = kDefaultFrequencyGhz;
  double h = 0.15;
  double omega = 0.0;

  ViewGeometry geometry() const { return {incidence_deg, frequency_ghz}; }
  void validate() const;

  /// Land-cover look-up defaults: bare_soil (h 0.15, omega 0) and grassland
  /// (h 0.156, omega 0.05). Unknown classes get h = omega = 0.
  static SurfaceConfig for_land_cover(const std::string& land_cover, double clay_fraction,
                                      double incidence_deg = kDefaultIncidenceDeg);
};

}  // namespace tauomega
