#include "doctest.h"
#include "tauomega/optimize.hpp"

#include <cmath>
#include <random>

using namespace tauomega::optimize;
using doctest::Approx;

TEST_SUITE("optimize") {

TEST_CASE("golden section finds an interior minimum") {
  const auto r = golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, {0, 1}, 1e-10);
  CHECK(r.x == Approx(0.3).epsilon(1e-8));
  CHECK(r.width < 1e-10);
}

TEST_CASE("minimum on a bound is reported on the bound") {
  const auto lo = golden_section([](double x) { return x; }, {0.01, 0.7}, 1e-9);
  CHECK(lo.x == 0.01);
  const auto hi = golden_section([](double x) { return -x; }, {0.01, 0.7}, 1e-9);
  CHECK(hi.x == 0.7);
}

TEST_CASE("flat function resolves to the smallest abscissa") {
  const auto r = minimize_1d([](double) { return 1.0; }, {0, 1});
  CHECK(r.x == 0);
}

TEST_CASE("grid seeding escapes a local minimum") {
  // Deep well near 0.8, shallow well near 0.2.
  auto f = [](double x) {
    return -std::exp(-std::pow((x - 0.8) / 0.05, 2)) - 0.5 * std::exp(-std::pow((x - 0.2) / 0.1, 2));
  };
  CHECK(minimize_1d(f, {0, 1}).x == Approx(0.8).epsilon(1e-6));
}

TEST_CASE("non-finite everywhere yields no minimum") {
  const auto r = minimize_1d([](double) { return NAN; }, {0, 1});
  CHECK(std::isinf(r.f));
}

TEST_CASE("2-D minimiser follows a tilted valley") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 20; ++k) {
    const double x0 = 0.05 + 0.6 * u(rng), y0 = 2.5 * u(rng);
    auto f = [&](double x, double y) {
      const double a = (x - x0) + 0.2 * (y - y0);
      const double b = 0.05 * (y - y0);
      return 1e4 * a * a + b * b;
    };
    const auto r = minimize_2d(f, {0.01, 0.7}, {0, 3});
    CHECK(r.x[0] == Approx(x0).epsilon(1e-6));
    CHECK(r.x[1] == Approx(y0).epsilon(1e-4));
  }
}

TEST_CASE("2-D minimiser with the optimum on a corner") {
  const auto r = minimize_2d([](double x, double y) { return x + y; }, {0.01, 0.7}, {0, 3});
  CHECK(r.x[0] == 0.01);
  CHECK(r.x[1] == 0);
}

TEST_CASE("grid helpers") {
  const auto g = grid({0, 1}, 5);
  CHECK(g[1] == 0.25);
  const auto n = neighbourhood(g, 0, 1);
  CHECK(n.lo == 0);
  CHECK(n.hi == 0.25);
  Eigen::ArrayXd v(4);
  v << 3, 1, 1, NAN;
  CHECK(argmin_first(v) == 1);
}

}
