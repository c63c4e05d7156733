#pragma once

namespace tauomega {

/// Ground intersection of the 3-dB beam cone with a flat surface.
struct FootprintEllipse {
  double major_axis_m{};     // along the look direction
  double minor_axis_m{};     // across the look direction
  double center_offset_m{};  // from the nadir point along the look direction

  double area_m2() const;
};

/// Footprint of an antenna at `height_m` above ground, tilted to
/// `incidence_deg`, with full 3-dB beamwidth `beamwidth_deg`.
FootprintEllipse footprint(double height_m, double incidence_deg, double beamwidth_deg);

}  // namespace tauomega
