#pragma once

// Bounded derivative-free minimisation: uniform grid seeding followed by
// golden-section refinement. The 2-D variant minimises the profile
// g(x) = min_y f(x, y) with nested golden-section searches.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

#include <Eigen/Core>

namespace tauomega::optimize {

inline constexpr double kInvPhi = 0.61803398874989484820;  // 1/phi

struct Interval {
  double lo;
  double hi;
  double width() const { return hi - lo; }
};

struct ScalarResult {
  double x = std::numeric_limits<double>::quiet_NaN();
  double f = std::numeric_limits<double>::infinity();
  double width = std::numeric_limits<double>::infinity();  // final bracket width
  std::size_t evaluations = 0;
};

/// Golden-section search on [lo, hi] until the bracket is narrower than tol.
/// The returned point is the best of the final interior estimate and the two
/// final bracket ends, so a minimum sitting on a bound is reported on it.
/// Ties go to the smaller abscissa.
template <typename F>
ScalarResult golden_section(F&& f, Interval bracket, double tol, int max_iterations = 300) {
  ScalarResult r;
  double a = bracket.lo;
  double b = bracket.hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  r.evaluations = 2;
  for (int it = 0; it < max_iterations && (b - a) >= tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++r.evaluations;
  }
  r.width = b - a;

  const double mid = 0.5 * (a + b);
  const double candidates[] = {a, c, mid, d, b};
  const double known[] = {std::numeric_limits<double>::quiet_NaN(), fc,
                          std::numeric_limits<double>::quiet_NaN(), fd,
                          std::numeric_limits<double>::quiet_NaN()};
  for (int i = 0; i < 5; ++i) {
    double fx = known[i];
    if (std::isnan(fx)) {
      fx = f(candidates[i]);
      ++r.evaluations;
    }
    if (fx < r.f || (fx == r.f && candidates[i] < r.x)) {
      r.f = fx;
      r.x = candidates[i];
    }
  }
  return r;
}

/// n equally spaced points on [lo, hi], endpoints included.
inline Eigen::ArrayXd grid(Interval range, Eigen::Index n) {
  return Eigen::ArrayXd::LinSpaced(n, range.lo, range.hi);
}

/// Index of the smallest finite value; ties resolve to the lowest index.
/// Returns -1 when no value is finite.
inline Eigen::Index argmin_first(const Eigen::ArrayXd& values) {
  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (std::isfinite(values[i]) && (best < 0 || values[i] < values[best])) best = i;
  return best;
}

/// Cells [i - cells, i + cells] of `points`, clipped to the grid.
inline Interval neighbourhood(const Eigen::ArrayXd& points, Eigen::Index i, Eigen::Index cells) {
  const Eigen::Index lo = std::max<Eigen::Index>(0, i - cells);
  const Eigen::Index hi = std::min<Eigen::Index>(points.size() - 1, i + cells);
  return {points[lo], points[hi]};
}

struct MinimizeOptions {
  Eigen::Index grid_points = 64;
  double tolerance = 1e-9;
};

/// Grid seed then golden-section refinement inside the neighbouring cells.
template <typename F>
ScalarResult minimize_1d(F&& f, Interval range, const MinimizeOptions& opt = {}) {
  const Eigen::ArrayXd xs = grid(range, opt.grid_points);
  Eigen::ArrayXd fs(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);
  const Eigen::Index best = argmin_first(fs);
  if (best < 0) {
    ScalarResult failed;
    failed.evaluations = static_cast<std::size_t>(xs.size());
    return failed;
  }
  auto r = golden_section(f, neighbourhood(xs, best, 1), opt.tolerance);
  r.evaluations += static_cast<std::size_t>(xs.size());
  if (fs[best] < r.f) {
    r.x = xs[best];
    r.f = fs[best];
  }
  return r;
}

struct PlanarResult {
  Eigen::Vector2d x = Eigen::Vector2d::Constant(std::numeric_limits<double>::quiet_NaN());
  double f = std::numeric_limits<double>::infinity();
  Eigen::Vector2d width = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  std::size_t evaluations = 0;
};

struct Minimize2dOptions {
  Eigen::Index grid_points = 64;
  double tolerance_x = 1e-9;
  double tolerance_y = 1e-9;
  Eigen::Index bracket_cells_x = 1;
};

/// Minimises the profile g(x) = min_y f(x, y). g is tabulated on an x grid
/// (each entry a full 1-D minimisation over y), then refined by
/// golden-section in the cells around the best grid entry. Following the
/// profile keeps the search on the valley floor when x and y trade off.
template <typename F>
PlanarResult minimize_2d(F&& f, Interval range_x, Interval range_y,
                         const Minimize2dOptions& opt = {}) {
  PlanarResult out;
  out.evaluations = 0;
  double inner_width = 0;
  auto profile = [&](double x) {
    auto inner = minimize_1d([&](double y) { return f(x, y); }, range_y,
                             {opt.grid_points, opt.tolerance_y});
    out.evaluations += inner.evaluations;
    return inner;
  };

  const Eigen::ArrayXd xs = grid(range_x, opt.grid_points);
  Eigen::ArrayXd gs(xs.size()), ys(xs.size()), ws(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const auto r = profile(xs[i]);
    gs[i] = r.f;
    ys[i] = r.x;
    ws[i] = r.width;
  }
  const Eigen::Index bi = argmin_first(gs);
  if (bi < 0) return out;

  auto outer = golden_section(
      [&](double x) {
        const auto r = profile(x);
        inner_width = std::max(inner_width, r.width);
        return r.f;
      },
      neighbourhood(xs, bi, opt.bracket_cells_x), opt.tolerance_x);
  const auto at_best = profile(outer.x);

  out.x = {outer.x, at_best.x};
  out.f = at_best.f;
  out.width = {outer.width, std::max(inner_width, at_best.width)};
  if (gs[bi] < out.f) {
    out.x = {xs[bi], ys[bi]};
    out.f = gs[bi];
    out.width[1] = ws[bi];
  }
  return out;
}

}  // namespace tauomega::optimize
