#pragma once

// Zeroth-order tau-omega emission model for a vegetated rough soil surface.

#include <cmath>
#include <complex>
#include <numbers>

#include "tauomega/dielectric.hpp"
#include "tauomega/types.hpp"

namespace tauomega {

template <typename Scalar = double>
struct SoilStateT {
  Scalar sm{};             // m³/m³
  Scalar clay_fraction{};  // mass fraction
  Scalar temperature_k{};

  void validate() const {
    if (!(sm >= 0 && sm <= 1)) throw DomainError("sm", "must lie in [0, 1]");
    if (!(clay_fraction >= 0 && clay_fraction <= 1))
      throw DomainError("clay_fraction", "must lie in [0, 1]");
    if (!(temperature_k > 0)) throw DomainError("temperature_k", "must be > 0");
  }
};

template <typename Scalar = double>
struct VegetationStateT {
  Scalar tau_nadir{};
  Scalar omega{};

  void validate() const {
    if (!(tau_nadir >= 0)) throw DomainError("tau_nadir", "must be >= 0");
    if (!(omega >= 0 && omega < 1)) throw DomainError("omega", "must lie in [0, 1)");
  }
};

template <typename Scalar = double>
struct SurfaceRoughnessT {
  Scalar h{};

  void validate() const {
    if (!(h >= 0)) throw DomainError("h", "must be >= 0");
  }
};

template <typename Scalar = double>
struct ViewGeometryT {
  Scalar incidence_deg{40};
  Scalar frequency_ghz{1.41};

  Scalar incidence_rad() const { return incidence_deg * std::numbers::pi_v<Scalar> / 180; }

  void validate() const {
    if (!(incidence_deg >= 0 && incidence_deg < 90))
      throw DomainError("incidence_deg", "must lie in [0, 90)");
    if (!(frequency_ghz > 0)) throw DomainError("frequency_ghz", "must be > 0");
  }
};

using SoilState = SoilStateT<double>;
using VegetationState = VegetationStateT<double>;
using SurfaceRoughness = SurfaceRoughnessT<double>;
using ViewGeometry = ViewGeometryT<double>;

template <typename Scalar = double>
struct Reflectivity {
  Scalar r_h;
  Scalar r_v;
};

/// Smooth half-space power reflectivities. The branch of sqrt(eps - sin²θ)
/// with non-negative imaginary part is taken (decaying transmitted wave).
template <typename Scalar = double>
Reflectivity<Scalar> fresnel_reflectivity(const ComplexPermittivityT<Scalar>& eps,
                                          const ViewGeometryT<Scalar>& geometry) {
  if (!(eps.real_part >= 1)) throw DomainError("eps.real_part", "must be >= 1");
  if (!(eps.imag_part >= 0)) throw DomainError("eps.imag_part", "must be >= 0");
  geometry.validate();

  using C = std::complex<Scalar>;
  const Scalar theta = geometry.incidence_rad();
  const Scalar cos_t = std::cos(theta);
  const Scalar sin_t = std::sin(theta);
  const C e = eps.value();
  C root = std::sqrt(e - sin_t * sin_t);
  if (root.imag() < 0) root = -root;

  const Scalar r_h = std::norm((cos_t - root) / (cos_t + root));
  const Scalar r_v = std::norm((e * cos_t - root) / (e * cos_t + root));
  return {std::clamp(r_h, Scalar(0), Scalar(1)), std::clamp(r_v, Scalar(0), Scalar(1))};
}

/// Rough-surface emissivity with r_rough = r_smooth * exp(-h cos²θ) and no
/// cross-polarisation mixing.
template <typename Scalar = double>
Scalar rough_emissivity(Scalar r_smooth, const SurfaceRoughnessT<Scalar>& roughness,
                        const ViewGeometryT<Scalar>& geometry) {
  if (!(r_smooth >= 0 && r_smooth <= 1)) throw DomainError("r_smooth", "must lie in [0, 1]");
  roughness.validate();
  geometry.validate();
  const Scalar c = std::cos(geometry.incidence_rad());
  return 1 - r_smooth * std::exp(-roughness.h * c * c);
}

/// One-way canopy transmissivity along the slant path.
template <typename Scalar = double>
Scalar vegetation_transmissivity(const VegetationStateT<Scalar>& veg,
                                 const ViewGeometryT<Scalar>& geometry) {
  if (!(veg.tau_nadir >= 0)) throw DomainError("tau_nadir", "must be >= 0");
  geometry.validate();
  return std::exp(-veg.tau_nadir / std::cos(geometry.incidence_rad()));
}

/// Single polarisation of the tau-omega model: soil emission through the
/// canopy, upward canopy emission, and downward canopy emission reflected by
/// the soil.
template <typename Scalar = double>
Scalar tau_omega(Scalar emissivity, Scalar gamma, Scalar omega, Scalar t_e) {
  return gamma * emissivity * t_e + (1 - omega) * (1 - gamma) * t_e +
         gamma * (1 - emissivity) * (1 - omega) * (1 - gamma) * t_e;
}

template <typename Scalar = double>
TbPairT<Scalar> forward_tb(const SoilStateT<Scalar>& soil, const VegetationStateT<Scalar>& veg,
                           const SurfaceRoughnessT<Scalar>& roughness,
                           const ViewGeometryT<Scalar>& geometry, Scalar t_e,
                           DielectricModel dielectric_model) {
  veg.validate();
  roughness.validate();
  geometry.validate();
  if (!(t_e > 0)) throw DomainError("t_e", "must be > 0");

  const auto eps =
      permittivity(dielectric_model, soil.sm, soil.clay_fraction, geometry.frequency_ghz);
  const auto r = fresnel_reflectivity(eps, geometry);
  const Scalar gamma = vegetation_transmissivity(veg, geometry);
  const Scalar e_h = rough_emissivity(r.r_h, roughness, geometry);
  const Scalar e_v = rough_emissivity(r.r_v, roughness, geometry);
  return {tau_omega(e_h, gamma, veg.omega, t_e), tau_omega(e_v, gamma, veg.omega, t_e)};
}

/// Weighted combination of surface and depth soil temperature.
template <typename Scalar = double>
Scalar effective_temperature(Scalar t_surface, Scalar t_depth, Scalar weight = 1) {
  if (!(t_surface > 0)) throw DomainError("t_surface", "must be > 0");
  if (!(t_depth > 0)) throw DomainError("t_depth", "must be > 0");
  if (!(weight >= 0 && weight <= 1)) throw DomainError("weight", "must lie in [0, 1]");
  return weight * t_surface + (1 - weight) * t_depth;
}

inline constexpr double kDefaultFrequencyGhz = 1.41;
inline constexpr double kDefaultIncidenceDeg = 40.0;

}  // namespace tauomega
