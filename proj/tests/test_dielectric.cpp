#include "doctest.h"
#include "tauomega/dielectric.hpp"

using namespace tauomega;
using doctest::Approx;

TEST_SUITE("dielectric") {

TEST_CASE("Mironov against the independent evaluation") {
  struct Row { double sm, clay, re, im; };
  const Row rows[] = {
      {0.0, 0.2, 2.3619705197279997, 0.096670930496},
      {0.1, 0.2, 5.082838536398747, 0.45550975939436283},
      {0.3, 0.2, 16.39641919846081, 2.0239159697410005},
      {0.1, 0.0, 6.251815913254017, 0.49582055405968667},
      {0.1, 1.0, 3.2281164055315146, 0.42895408776926797},
      {1.0, 0.2, 106.68516132956151, 15.935079796582269},
  };
  for (const auto& r : rows) {
    CAPTURE(r.sm);
    CAPTURE(r.clay);
    const auto e = mironov_permittivity(r.sm, r.clay, 1.41);
    CHECK(e.real_part == Approx(r.re).epsilon(1e-12));
    CHECK(e.imag_part == Approx(r.im).epsilon(1e-12));
  }
}

TEST_CASE("dry soil is the squared dry refractive index, nearly lossless") {
  const auto& c = mironov::kCoefficients;
  const double clay = 20;
  const double nd = c.nd0 + c.nd1 * clay + c.nd2 * clay * clay;
  const auto e = mironov_permittivity(0.0, 0.2, 1.41);
  CHECK(e.real_part == Approx(nd * nd).epsilon(2e-3));
  CHECK(e.imag_part < 0.1);
}

TEST_CASE("Mironov grows with moisture and keeps non-negative loss") {
  for (double clay : {0.0, 0.3, 0.7, 1.0}) {
    double prev = 0;
    for (int i = 0; i <= 100; ++i) {
      const auto e = mironov_permittivity(i / 100.0, clay, 1.41);
      CHECK(e.imag_part >= 0);
      CHECK(e.real_part > prev);
      prev = e.real_part;
    }
  }
}

TEST_CASE("Mironov domain errors name the field") {
  CHECK_THROWS_AS(mironov_permittivity(-0.01, 0.2, 1.41), DomainError);
  CHECK_THROWS_AS(mironov_permittivity(0.2, 1.5, 1.41), DomainError);
  try {
    mironov_permittivity(0.2, 0.2, 5.0);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.field() == "frequency_ghz");
  }
}

TEST_CASE("Topp polynomial and its inverse") {
  CHECK(topp_polynomial(1.0) == Approx(-0.0243457).epsilon(1e-12));
  CHECK(topp_polynomial(80.0) == Approx(0.9646).epsilon(1e-12));
  CHECK(topp_permittivity(0.0).real_part == Approx(1.880711916479125).epsilon(1e-10));
  CHECK(topp_permittivity(0.3).real_part == Approx(16.611629929626027).epsilon(1e-10));
  CHECK(topp_permittivity(0.3).imag_part == 0);
  for (int i = 0; i <= 90; ++i) {
    const double sm = i / 100.0;
    CHECK(topp_moisture(topp_permittivity(sm).real_part).sm == Approx(sm).epsilon(1e-9));
  }
}

TEST_CASE("Topp moisture clamps and flags") {
  const auto low = topp_moisture(1.0);
  CHECK(low.clamped);
  CHECK(low.sm == 0);
  CHECK(low.raw < 0);
  CHECK_FALSE(topp_moisture(10.0).clamped);
  CHECK_THROWS_AS(topp_moisture(0.5), DomainError);
  CHECK_THROWS_AS(topp_permittivity(0.97), DomainError);
}

TEST_CASE("templated on float") {
  const auto e = mironov_permittivity(0.1f, 0.2f, 1.41f);
  CHECK(e.real_part == Approx(5.0828385).epsilon(1e-5));
}

}
