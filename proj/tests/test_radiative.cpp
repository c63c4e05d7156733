#include "doctest.h"
#include "tauomega/radiative.hpp"

#include <random>

using namespace tauomega;
using doctest::Approx;

TEST_SUITE("radiative") {

const ViewGeometry kGeom{40.0, 1.41};

TEST_CASE("rough emissivity and transmissivity fixtures") {
  CHECK(rough_emissivity(0.3, SurfaceRoughness{0.15}, kGeom) == Approx(0.7252782241541769).epsilon(1e-14));
  CHECK(vegetation_transmissivity(VegetationState{0.12, 0.0}, kGeom) ==
        Approx(0.8550042197137182).epsilon(1e-14));
}

TEST_CASE("forward model fixtures") {
  auto tb = forward_tb(SoilState{0.30, 0.2, 292.15}, VegetationState{0, 0}, SurfaceRoughness{0.15},
                       kGeom, 292.15, DielectricModel::Mironov);
  CHECK(tb.tb_h == Approx(168.4261652111122).epsilon(1e-12));
  CHECK(tb.tb_v == Approx(220.0248746042034).epsilon(1e-12));

  tb = forward_tb(SoilState{1.0, 0.2, 292.15}, VegetationState{0, 0}, SurfaceRoughness{0},
                  kGeom, 292.15, DielectricModel::Mironov);
  CHECK(tb.tb_h == Approx(74.70005934764377).epsilon(1e-12));
  CHECK(tb.tb_v == Approx(115.4877874321493).epsilon(1e-12));

  tb = forward_tb(SoilState{0.3, 0.2, 292.15}, VegetationState{0.1, 0}, SurfaceRoughness{0},
                  kGeom, 292.15, DielectricModel::Mironov);
  CHECK(tb.tb_h == Approx(188.08724834249475).epsilon(1e-12));
  CHECK(tb.tb_v == Approx(231.48635321653228).epsilon(1e-12));
}

TEST_CASE("Fresnel limits") {
  const auto vacuum = fresnel_reflectivity(ComplexPermittivity{1.0, 0.0}, kGeom);
  CHECK(vacuum.r_h == Approx(0).epsilon(1e-15));
  CHECK(vacuum.r_v == Approx(0).epsilon(1e-15));
  const auto normal = fresnel_reflectivity(ComplexPermittivity{9.0, 0.0}, ViewGeometry{0.0, 1.41});
  CHECK(normal.r_h == Approx(0.25).epsilon(1e-14));  // ((3-1)/(3+1))^2
  CHECK(normal.r_v == Approx(0.25).epsilon(1e-14));
  const auto grazing = fresnel_reflectivity(ComplexPermittivity{9.0, 1.0}, ViewGeometry{89.9, 1.41});
  CHECK(grazing.r_h > 0.99);
  CHECK(grazing.r_h >= grazing.r_v);
}

TEST_CASE("bare smooth soil reduces to e * T") {
  const double te = 290;
  const double e = 0.8;
  CHECK(tau_omega(e, 1.0, 0.0, te) == Approx(e * te));
  CHECK(tau_omega(e, 0.0, 0.1, te) == Approx(0.9 * te));
}

TEST_CASE("tb scales linearly with effective temperature") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 100; ++i) {
    const SoilState s{u(rng), u(rng), 290};
    const VegetationState v{u(rng), 0.2 * u(rng)};
    const SurfaceRoughness r{0.5 * u(rng)};
    const auto a = forward_tb(s, v, r, kGeom, 280.0, DielectricModel::Mironov);
    const auto b = forward_tb(s, v, r, kGeom, 2 * 280.0, DielectricModel::Mironov);
    CHECK(b.tb_h == Approx(2 * a.tb_h).epsilon(1e-13));
    CHECK(b.tb_v == Approx(2 * a.tb_v).epsilon(1e-13));
  }
}

TEST_CASE("roughness raises emission") {
  double prev = 0;
  for (double h : {0.0, 0.1, 0.3, 0.6, 1.0}) {
    const auto tb = forward_tb(SoilState{0.25, 0.2, 290}, VegetationState{0, 0}, SurfaceRoughness{h},
                               kGeom, 290.0, DielectricModel::Mironov);
    CHECK(tb.tb_h > prev);
    prev = tb.tb_h;
  }
}

TEST_CASE("validation rejects out-of-domain state") {
  CHECK_THROWS_AS(VegetationState({-0.1, 0}).validate(), DomainError);
  CHECK_THROWS_AS(VegetationState({0.1, 1.0}).validate(), DomainError);
  CHECK_THROWS_AS(SurfaceRoughness{-1}.validate(), DomainError);
  CHECK_THROWS_AS(ViewGeometry({90, 1.41}).validate(), DomainError);
  CHECK_THROWS_AS(forward_tb(SoilState{0.2, 0.2, 290}, VegetationState{0, 0}, SurfaceRoughness{0},
                             kGeom, -1.0, DielectricModel::Mironov),
                  DomainError);
  CHECK_THROWS_AS(fresnel_reflectivity(ComplexPermittivity{0.5, 0}, kGeom), DomainError);
}

TEST_CASE("effective temperature weighting") {
  CHECK(effective_temperature(300.0, 290.0) == 300.0);
  CHECK(effective_temperature(300.0, 290.0, 0.25) == Approx(292.5));
  CHECK_THROWS_AS(effective_temperature(300.0, 290.0, 1.5), DomainError);
}

}
