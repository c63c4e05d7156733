#pragma once

// Soil dielectric models: the clay-parameterised Mironov spectroscopic model
// and the empirical Topp cubic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "tauomega/types.hpp"

namespace tauomega {

/// eps = real_part + i*imag_part, imag_part >= 0 denotes loss.
template <typename Scalar = double>
struct ComplexPermittivityT {
  Scalar real_part{1};
  Scalar imag_part{0};

  std::complex<Scalar> value() const { return {real_part, imag_part}; }
};

using ComplexPermittivity = ComplexPermittivityT<double>;

namespace mironov {

/// Coefficients of the clay-parameterised generalised refractive mixing
/// dielectric model (Mironov, Kosolapova & Fomin 2009). Polynomials are in
/// clay percent C. Relaxation times in seconds, conductivities in S/m.
struct Coefficients {
  // dry soil refractive index n_d = n0 + n1*C + n2*C^2, extinction k_d = k0 + k1*C
  double nd0 = 1.634, nd1 = -0.539e-2, nd2 = 0.2748e-4;
  double kd0 = 0.03952, kd1 = -0.04038e-2;
  // maximum bound-water fraction
  double mvt0 = 0.02863, mvt1 = 0.30673e-2;
  // bound water Debye parameters
  double eps0b0 = 79.8, eps0b1 = -85.4e-2, eps0b2 = 32.7e-4;
  double taub0 = 1.062e-11, taub1 = 3.450e-12 * 1e-2;
  double sigb0 = 0.3112, sigb1 = 0.467e-2;
  // free water Debye parameters
  double eps0u = 100.0;
  double tauu = 8.5e-12;
  double sigu0 = 0.3631, sigu1 = 1.217e-2;
  double eps_inf = 4.9;
  double eps_vacuum = 8.854e-12;
};

inline constexpr Coefficients kCoefficients{};

template <typename Scalar>
struct RefractiveIndex {
  Scalar n;
  Scalar k;
};

template <typename Scalar>
RefractiveIndex<Scalar> debye_water(Scalar eps_static, Scalar relaxation_s, Scalar conductivity,
                                    Scalar frequency_hz) {
  const auto& c = kCoefficients;
  const Scalar wt = 2 * std::numbers::pi_v<Scalar> * frequency_hz * relaxation_s;
  const Scalar denom = 1 + wt * wt;
  const Scalar re = c.eps_inf + (eps_static - c.eps_inf) / denom;
  const Scalar im = (eps_static - c.eps_inf) * wt / denom +
                    conductivity / (2 * std::numbers::pi_v<Scalar> * frequency_hz * c.eps_vacuum);
  const Scalar mod = std::hypot(re, im);
  return {std::sqrt((mod + re) / 2), std::sqrt((mod - re) / 2)};
}

}  // namespace mironov

/// Complex permittivity of moist soil from volumetric moisture (m³/m³), clay
/// mass fraction and frequency (GHz, L-band 1–2 GHz supported).
template <typename Scalar = double>
ComplexPermittivityT<Scalar> mironov_permittivity(Scalar sm, Scalar clay_fraction,
                                                  Scalar frequency_ghz) {
  if (!(sm >= 0 && sm <= 1)) throw DomainError("sm", "must lie in [0, 1]");
  if (!(clay_fraction >= 0 && clay_fraction <= 1))
    throw DomainError("clay_fraction", "must lie in [0, 1]");
  if (!(frequency_ghz >= 1 && frequency_ghz <= 2))
    throw DomainError("frequency_ghz", "must lie in [1, 2] GHz");

  const auto& c = mironov::kCoefficients;
  const Scalar clay = clay_fraction * 100;
  const Scalar f = frequency_ghz * 1e9;

  const Scalar nd = c.nd0 + c.nd1 * clay + c.nd2 * clay * clay;
  // The linear fit turns negative above ~98 % clay; a dry soil cannot have gain.
  const Scalar kd = std::max(Scalar(0), Scalar(c.kd0 + c.kd1 * clay));
  const Scalar mvt = c.mvt0 + c.mvt1 * clay;
  const auto bound = mironov::debye_water<Scalar>(c.eps0b0 + c.eps0b1 * clay + c.eps0b2 * clay * clay,
                                                  c.taub0 + c.taub1 * clay, c.sigb0 + c.sigb1 * clay, f);
  const auto free = mironov::debye_water<Scalar>(c.eps0u, c.tauu, c.sigu0 + c.sigu1 * clay, f);

  Scalar n, k;
  if (sm <= mvt) {
    n = nd + (bound.n - 1) * sm;
    k = kd + bound.k * sm;
  } else {
    n = nd + (bound.n - 1) * mvt + (free.n - 1) * (sm - mvt);
    k = kd + bound.k * mvt + free.k * (sm - mvt);
  }
  return {n * n - k * k, 2 * n * k};
}

template <typename Scalar = double>
struct ToppMoistureT {
  Scalar sm;       // clamped to [0, 1]
  Scalar raw;      // polynomial value before clamping
  bool clamped;
};

using ToppMoisture = ToppMoistureT<double>;

/// Topp et al. (1980) cubic; valid for eps_real >= 1.
template <typename Scalar = double>
constexpr Scalar topp_polynomial(Scalar eps_real) {
  return Scalar(-5.3e-2) +
         eps_real * (Scalar(2.92e-2) + eps_real * (Scalar(-5.5e-4) + eps_real * Scalar(4.3e-6)));
}

template <typename Scalar = double>
ToppMoistureT<Scalar> topp_moisture(Scalar eps_real) {
  if (!(eps_real >= 1)) throw DomainError("eps_real", "must be >= 1");
  const Scalar raw = topp_polynomial(eps_real);
  const Scalar sm = std::clamp(raw, Scalar(0), Scalar(1));
  return {sm, raw, sm != raw};
}

inline constexpr double kToppEpsMin = 1.0;
inline constexpr double kToppEpsMax = 80.0;

/// Inverse of the Topp cubic by bisection on eps in [1, 80]. The cubic is
/// strictly increasing there, so the root is unique.
template <typename Scalar = double>
ComplexPermittivityT<Scalar> topp_permittivity(Scalar sm) {
  if (!(sm >= 0 && sm <= 1)) throw DomainError("sm", "must lie in [0, 1]");
  Scalar lo = kToppEpsMin;
  Scalar hi = kToppEpsMax;
  if (sm > topp_polynomial(hi))
    throw DomainError("sm", "outside the invertible branch of the Topp cubic on eps in [1, 80]");
  // sm >= 0 > topp_polynomial(1), so the root is bracketed.
  while (hi - lo > Scalar(1e-12)) {
    const Scalar mid = (lo + hi) / 2;
    if (topp_polynomial(mid) < sm)
      lo = mid;
    else
      hi = mid;
  }
  return {(lo + hi) / 2, 0};
}

template <typename Scalar = double>
ComplexPermittivityT<Scalar> permittivity(DielectricModel model, Scalar sm, Scalar clay_fraction,
                                          Scalar frequency_ghz) {
  return model == DielectricModel::Topp ? topp_permittivity(sm)
                                        : mironov_permittivity(sm, clay_fraction, frequency_ghz);
}

}  // namespace tauomega
