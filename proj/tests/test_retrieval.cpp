#include "doctest.h"
#include "tauomega/retrieval.hpp"

#include <random>
#include <sstream>

using namespace tauomega;
using doctest::Approx;

TEST_SUITE("retrieval") {

const SurfaceConfig kGrass = SurfaceConfig::for_land_cover("grassland", 0.2);
const SurfaceConfig kBare = SurfaceConfig::for_land_cover("bare_soil", 0.2);

TEST_CASE("shipped presets") {
  const auto scav = builtin_preset("SCAV").resolve("grassland");
  CHECK(scav.h == 0.156);
  CHECK(scav.omega == 0.05);
  CHECK(scav.polarization() == Polarization::V);
  CHECK(builtin_preset("SCAH").resolve("bare_soil").h == 0.15);
  const auto rdca = builtin_preset("RDCA").resolve("grassland");
  CHECK(rdca.h == 0.4612);
  CHECK(rdca.omega == 0.0608);
  CHECK(rdca.lambda == 20);
  const auto dca0 = builtin_preset("DCA0").resolve("grassland");
  CHECK(dca0.dielectric == DielectricModel::Topp);
  CHECK(dca0.t_e_source == TeSource::Constant292_15);
  CHECK(builtin_preset("DCA2").t_e_source == TeSource::MeasuredTs);
  CHECK_FALSE(is_builtin_preset("DCA3"));
}

TEST_CASE("preset text round trip") {
  for (auto name : kPresetNames) {
    const auto& p = builtin_preset(name);
    std::istringstream in(p.to_text());
    const auto q = AlgorithmPreset::parse(in, std::string(name));
    CHECK(q.to_text() == p.to_text());
  }
}

TEST_CASE("preset files reject contradictions and unknown keys") {
  std::istringstream unknown("name = X\nkind = DCA1\nh = 0\nomega = 0\nt_e = 292.15\ntau = retrieved\n"
                             "dielectric = mironov\ncolour = red\n");
  CHECK_THROWS_AS(AlgorithmPreset::parse(unknown, "x"), DataError);
  std::istringstream topp("name = X\nkind = DCA0\nh = 0\nomega = 0\nt_e = 292.15\ntau = retrieved\n"
                          "dielectric = mironov\n");
  CHECK_THROWS(AlgorithmPreset::parse(topp, "y"));
  AlgorithmConfig sca;
  sca.kind = AlgorithmKind::SCAV;
  sca.tau_source = TauSource::Retrieved;
  CHECK_THROWS_AS(sca.validate(), DomainError);
}

TEST_CASE("zero cost at the generating state") {
  const auto cfg = builtin_preset("RDCA").resolve("grassland");
  const auto tb = simulate(0.27, 0.12, cfg, kGrass, 290.0);
  CHECK(cost(0.27, 0.12, tb, cfg, kGrass, 290.0, 0.12) == Approx(0).epsilon(1e-20));
  CHECK(cost(0.37, 0.12, tb, cfg, kGrass, 290.0, 0.12) > 0);
  CHECK(cost(0.17, 0.12, tb, cfg, kGrass, 290.0, 0.12) > 0);
}

TEST_CASE("single-channel inversion") {
  for (auto name : {"SCAV", "SCAH"}) {
    const auto cfg = builtin_preset(name).resolve("grassland");
    for (double sm : {0.05, 0.2, 0.45}) {
      const auto tb = simulate(sm, 0.08, cfg, kGrass, 288.0);
      const auto r = retrieve(tb, cfg, kGrass, 288.0, 0.08);
      CHECK(r.sm == Approx(sm).epsilon(1e-6));
      CHECK_FALSE(r.tau.has_value());
      CHECK(r.converged);
      CHECK_FALSE(r.boundary_hit);
    }
  }
}

TEST_CASE("dual-channel grid oracle agreement") {
  const auto cfg = builtin_preset("DCA1").resolve("bare_soil");
  const auto tb = simulate(0.31, 0.14, cfg, kBare, kConstantTe);
  double best = 1e300, bs = 0, bt = 0;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      const double s = 0.01 + 0.69 * i / 199, t = 3.0 * j / 199;
      const double c = cost(s, t, tb, cfg, kBare, kConstantTe, std::nullopt);
      if (c < best) best = c, bs = s, bt = t;
    }
  const auto r = retrieve(tb, cfg, kBare, kConstantTe);
  CHECK(std::abs(bs - 0.31) < 0.01);
  CHECK(std::abs(bt - 0.14) < 0.02);
  CHECK(r.sm == Approx(0.31).epsilon(1e-6));
  CHECK(*r.tau == Approx(0.14).epsilon(1e-5));
  CHECK(r.cost <= best);
}

TEST_CASE("RDCA pins tau to the NDVI estimate when consistent") {
  const auto cfg = builtin_preset("RDCA").resolve("grassland");
  const auto tb = simulate(0.22, 0.1, cfg, kGrass, 291.0);
  const auto r = retrieve(tb, cfg, kGrass, 291.0, 0.1);
  CHECK(r.sm == Approx(0.22).epsilon(1e-6));
  CHECK(*r.tau == Approx(0.1).epsilon(1e-6));
}

TEST_CASE("out-of-range observations hit the bounds") {
  const auto cfg = builtin_preset("SCAV").resolve("bare_soil");
  const auto hot = retrieve({280, 290}, cfg, kBare, 290.0, 0.0);
  CHECK(hot.sm == 0.01);
  CHECK(hot.boundary_hit);
  const auto cold = retrieve({60, 90}, cfg, kBare, 290.0, 0.0);
  CHECK(cold.sm == 0.7);
  CHECK(cold.boundary_hit);
}

TEST_CASE("retrieve input checks") {
  const auto rdca = builtin_preset("RDCA").resolve("grassland");
  CHECK_THROWS_AS(retrieve({150, 200}, rdca, kGrass, 290.0), DomainError);
  CHECK_THROWS_AS(retrieve({NAN, 200}, rdca, kGrass, 290.0, 0.1), DomainError);
  CHECK_THROWS_AS(retrieve({150, 200}, rdca, kGrass, 0.0, 0.1), DomainError);
}

TEST_CASE("effective temperature source") {
  const auto dca1 = builtin_preset("DCA1").resolve("bare_soil");
  const auto dca2 = builtin_preset("DCA2").resolve("bare_soil");
  CHECK(resolve_te(dca1, 280.0) == kConstantTe);
  CHECK(resolve_te(dca2, 280.0) == 280.0);
  CHECK_THROWS(resolve_te(dca2, std::nullopt));
}

TEST_CASE("noisy observations: sm moves the expected way") {
  const auto cfg = builtin_preset("SCAV").resolve("bare_soil");
  const auto tb = simulate(0.25, 0.0, cfg, kBare, 290.0);
  const auto warmer = retrieve({tb.tb_h + 3, tb.tb_v + 3}, cfg, kBare, 290.0, 0.0);
  const auto cooler = retrieve({tb.tb_h - 3, tb.tb_v - 3}, cfg, kBare, 290.0, 0.0);
  CHECK(warmer.sm < 0.25);
  CHECK(cooler.sm > 0.25);
}

}
