#include "tauomega/geometry.hpp"

#include <cmath>
#include <numbers>

#include "tauomega/types.hpp"

namespace tauomega {

double FootprintEllipse::area_m2() const {
  return std::numbers::pi / 4.0 * major_axis_m * minor_axis_m;
}

FootprintEllipse footprint(double height_m, double incidence_deg, double beamwidth_deg) {
  if (!(height_m > 0) || !std::isfinite(height_m)) throw DomainError("height_m", "must be > 0");
  if (!(beamwidth_deg > 0 && beamwidth_deg < 180))
    throw DomainError("beamwidth_deg", "must lie in (0, 180)");
  if (!(incidence_deg >= 0)) throw DomainError("incidence_deg", "must be >= 0");
  if (!(incidence_deg + beamwidth_deg / 2 < 90))
    throw DomainError("incidence_deg", "beam edge reaches the horizon (incidence + beamwidth/2 >= 90)");

  constexpr double deg = std::numbers::pi / 180.0;
  const double theta = incidence_deg * deg;
  const double half = beamwidth_deg / 2 * deg;
  const double far = std::tan(theta + half);
  const double near = std::tan(theta - half);
  return {height_m * (far - near), 2.0 * (height_m / std::cos(theta)) * std::tan(half),
          height_m * (far + near) / 2.0};
}

}  // namespace tauomega
