#include "doctest.h"
#include "tauomega/types.hpp"
#include "tauomega/validation.hpp"

#include <sstream>

using namespace tauomega;
using doctest::Approx;

TEST_SUITE("validation") {

TEST_CASE("identical series") {
  const std::vector<double> x{0.1, 0.2, 0.3, 0.25};
  const auto m = metrics(std::span<const double>(x), std::span<const double>(x));
  CHECK(m.bias == 0);
  CHECK(m.rmse == 0);
  CHECK(m.ubrmse == 0);
  CHECK(*m.r == Approx(1));
}

TEST_CASE("constant offset is all bias") {
  Eigen::ArrayXd ref(4), obs(4);
  ref << 0.1, 0.2, 0.3, 0.25;
  obs = ref + 0.05;
  const auto m = metrics(obs, ref);
  CHECK(m.bias == Approx(0.05));
  CHECK(m.rmse == Approx(0.05));
  CHECK(m.ubrmse == Approx(0).epsilon(1e-7));
}

TEST_CASE("hand-computed example") {
  Eigen::ArrayXd obs(3), ref(3);
  obs << 1, 2, 4;
  ref << 1, 3, 3;
  const auto m = metrics(obs, ref);
  CHECK(m.bias == Approx(0));
  CHECK(m.rmse == Approx(std::sqrt(2.0 / 3)));
  CHECK(m.ubrmse == Approx(std::sqrt(2.0 / 3)));
  CHECK(*m.r == Approx(0.7559289460184544));
}

TEST_CASE("R flags") {
  Eigen::ArrayXd flat(3), ref(3);
  flat << 0.2, 0.2, 0.2;
  ref << 0.1, 0.2, 0.3;
  const auto m = metrics(flat, ref);
  CHECK_FALSE(m.r.has_value());
  CHECK((m.flags & kRZeroVariance) != 0);
  CHECK(metrics_flags_to_string(m.flags) == "RZeroVariance");

  Eigen::ArrayXd a(2), b(2);
  a << 0.1, 0.3;
  b << 0.2, 0.25;
  CHECK((metrics(a, b).flags & kRShortSeries) != 0);
}

TEST_CASE("length checks") {
  Eigen::ArrayXd a(3), b(2), c(1);
  a.setZero();
  b.setZero();
  c.setZero();
  CHECK_THROWS_AS(metrics(a, b), DomainError);
  CHECK_THROWS_AS(metrics(c, c), DomainError);
}

TEST_CASE("spatial mean and spread") {
  const ReferenceRecord r{0, {0.1, 0.2, 0.3, 0.4, 0.5}, 290};
  CHECK(spatial_average(r) == Approx(0.3));
  CHECK(spatial_std(r) == Approx(std::sqrt(0.02)));
}

TEST_CASE("reference file and time pairing") {
  std::istringstream in("timestamp,sm_1,sm_2,soil_temp_k\n"
                        "2021-11-04T10:00:00Z,0.2,0.3,290\n"
                        "2021-11-04T12:00:00Z,0.1,0.1,291\n");
  const auto refs = read_reference(in, "ref.csv");
  REQUIRE(refs.size() == 2);
  CHECK(refs[0].point_sm.size() == 2);
  const double t0 = refs[0].timestamp;
  CHECK(*nearest_reference(refs, t0 + 600) == 0);
  CHECK(*nearest_reference(refs, t0 + 3600) == 0);  // tie -> earlier
  CHECK_FALSE(nearest_reference(refs, t0 + 5000, 1800).has_value());

  const std::vector<std::pair<double, double>> obs{{t0 + 60, 0.24}, {t0 + 5000, 0.5}, {t0 + 7200, 0.12}};
  const auto p = pair_by_time(obs, refs);
  CHECK(p.obs.size() == 2);
  CHECK(p.unmatched == 1);
  CHECK(p.ref[0] == Approx(0.25));

  std::istringstream bad("timestamp,sm_1,soil_temp_k\n2021-11-04T10:00:00Z,1.2,290\n");
  CHECK_THROWS_AS(read_reference(bad, "bad.csv"), DataError);
}

}
