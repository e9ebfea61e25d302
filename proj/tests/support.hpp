#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "terrakit/raster.hpp"
#include "terrakit/tin.hpp"

namespace testing_support {

using terrakit::GridSpec;
using terrakit::Raster;

/// Raster whose cell (r, c) holds f(center x, center y).
inline Raster sample_grid(const GridSpec& spec, const std::function<double(double, double)>& f) {
  Raster r(spec, spec.nodata);
  for (std::size_t row = 0; row < spec.nrows; ++row) {
    for (std::size_t col = 0; col < spec.ncols; ++col) {
      const auto p = spec.cell_center(row, col);
      r.at(row, col) = f(p.x, p.y);
    }
  }
  return r;
}

inline GridSpec grid(std::size_t ncols, std::size_t nrows, double cellsize = 1.0, double xll = 0.0,
                     double yll = 0.0) {
  GridSpec s;
  s.ncols = ncols;
  s.nrows = nrows;
  s.cellsize = cellsize;
  s.xll = xll;
  s.yll = yll;
  return s;
}

/// Random raster with values in [lo, hi) and the given nodata fraction.
inline Raster random_raster(std::mt19937_64& rng, const GridSpec& spec, double lo, double hi,
                            double nodata_fraction) {
  std::uniform_real_distribution<double> value(lo, hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Raster r(spec, spec.nodata);
  for (auto& v : r.values) v = unit(rng) < nodata_fraction ? spec.nodata : value(rng);
  return r;
}

inline std::vector<terrakit::TinVertex> random_points(std::mt19937_64& rng, std::size_t n,
                                                      double extent) {
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<terrakit::TinVertex> pts(n);
  for (auto& p : pts) {
    p.x = u(rng);
    p.y = u(rng);
  }
  return pts;
}

/// Square contour ring of side 2*half centered on (cx, cy), vertices `step` apart.
inline std::vector<terrakit::TinVertex> square_ring(double half, double step, double z,
                                                    double cx = 0.0, double cy = 0.0) {
  std::vector<terrakit::TinVertex> out;
  const int n = static_cast<int>(std::lround(2 * half / step));
  for (int i = 0; i < n; ++i) {
    const double s = -half + i * step;
    out.push_back({cx + s, cy - half, z});
    out.push_back({cx + half, cy + s, z});
    out.push_back({cx - s, cy + half, z});
    out.push_back({cx - half, cy - s, z});
  }
  return out;
}

/// Outer ring at 100 m (half-side 100), inner ring at 90 m (half-side 40).
inline std::vector<terrakit::TinVertex> concentric_rings() {
  auto pts = square_ring(100, 20, 100.0);
  const auto inner = square_ring(40, 20, 90.0);
  pts.insert(pts.end(), inner.begin(), inner.end());
  return pts;
}

/// U-shaped valley draining south: flat floor 40 m wide, walls rising 0.1 m/m,
/// floor gradient 0.05 m/m. Contours every 2 m from 102 to 116 m, digitized
/// every 10 m in x starting off-axis, so same-level vertices bridge the floor.
struct ValleyFixture {
  std::vector<terrakit::TinVertex> points;
  double axis_x = 0.0;
  double y_north = 0.0;  ///< axis samples run from here...
  double y_south = 0.0;  ///< ...to here
};

inline ValleyFixture u_valley() {
  ValleyFixture f;
  constexpr double half_floor = 20.0, wall = 0.1, floor_gradient = 0.05;
  for (int level = 1; level <= 8; ++level) {
    const double z = 100.0 + 2.0 * level;
    for (double x = -95.0; x <= 100.0; x += 10.0) {
      const double rise = std::max(0.0, std::abs(x) - half_floor) * wall;
      f.points.push_back({x, (z - 100.0 - rise) / floor_gradient, z});
    }
  }
  f.y_north = 16.0 / floor_gradient;
  f.y_south = 2.0 / floor_gradient;
  return f;
}

}  // namespace testing_support
