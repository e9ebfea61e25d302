#include <doctest.h>

#include <cmath>
#include <numbers>
#include <queue>

#include "support.hpp"
#include "terrakit/error.hpp"
#include "terrakit/hydro.hpp"

using namespace terrakit;
using testing_support::grid;
using testing_support::sample_grid;

namespace {

Raster paraboloid(double cellsize) {
  const auto s = grid(static_cast<std::size_t>(60 / cellsize), static_cast<std::size_t>(60 / cellsize),
                      cellsize, -30, -30);
  return sample_grid(s, [](double x, double y) { return (x * x + y * y) / 100.0; });
}

Geometry square(double x0, double y0, double x1, double y1) {
  return Geometry::polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

// Independent BFS: the 4-connected component of `lake` cells containing the seed.
std::vector<bool> reachable(const LakeResult& lake, std::size_t seed) {
  const auto& s = lake.mask.spec;
  std::vector<bool> seen(s.cell_count(), false);
  std::queue<std::size_t> q;
  seen[seed] = true;
  q.push(seed);
  while (!q.empty()) {
    const auto k = q.front();
    q.pop();
    const long r = static_cast<long>(k / s.ncols), c = static_cast<long>(k % s.ncols);
    const long dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
    for (int i = 0; i < 4; ++i) {
      const long nr = r + dr[i], nc = c + dc[i];
      if (nr < 0 || nc < 0 || nr >= long(s.nrows) || nc >= long(s.ncols)) continue;
      const auto n = static_cast<std::size_t>(nr) * s.ncols + static_cast<std::size_t>(nc);
      if (!seen[n] && lake.mask.zone[n] == 1) {
        seen[n] = true;
        q.push(n);
      }
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("seed at or above the pour level gives an empty lake") {
  const Raster dem(grid(10, 10), 5.0);
  const auto lake = fill_lake(dem, {5, 5}, 5.0);
  CHECK(lake.cell_count == 0);
  CHECK(lake.area_m2 == 0.0);
  CHECK(lake.volume_m3 == 0.0);
  CHECK(lake.mask.count(1) == 0);
}

TEST_CASE("box pit: exact area and volume") {
  Raster dem(grid(20, 20, 1.0), 10.0);
  for (std::size_t r = 5; r < 15; ++r)
    for (std::size_t c = 5; c < 15; ++c) dem.at(r, c) = 8.0;
  const auto lake = fill_lake(dem, {10, 10}, 10.0);
  CHECK(lake.area_m2 == 100.0);
  CHECK(lake.volume_m3 == 200.0);
  CHECK(lake.max_depth_m == 2.0);
  CHECK_FALSE(lake.touched_boundary);
}

TEST_CASE("paraboloid bowl against the analytic integrals") {
  // z = r^2/100 below pour 4: radius 20, area 400 pi, volume
  // integral of (4 - r^2/100) 2 pi r dr over [0, 20] = 800 pi.
  const auto dem = paraboloid(0.5);
  const auto lake = fill_lake(dem, {0.1, 0.1}, 4.0);
  CHECK(std::abs(lake.area_m2 - 400 * std::numbers::pi) / (400 * std::numbers::pi) < 0.02);
  CHECK(std::abs(lake.volume_m3 - 800 * std::numbers::pi) / (800 * std::numbers::pi) < 0.02);
  CHECK_FALSE(lake.touched_boundary);
}

TEST_CASE("invariants: depth, volume sum, connectivity, monotone sweep") {
  const auto dem = paraboloid(1.0);
  const auto seed_cell = *dem.spec.cell_of(0.2, 0.2);
  const std::size_t seed = seed_cell.row * dem.spec.ncols + seed_cell.col;
  LakeResult previous;
  for (int i = 1; i <= 20; ++i) {
    const double pour = 0.3 * i;
    const auto lake = fill_lake(dem, {0.2, 0.2}, pour);
    double volume = 0.0, z_min = 1e300;
    for (std::size_t k = 0; k < dem.values.size(); ++k) {
      if (lake.mask.zone[k] != 1) continue;
      CHECK(dem.values[k] < pour);
      volume += (pour - dem.values[k]) * dem.spec.cellsize * dem.spec.cellsize;
      z_min = std::min(z_min, dem.values[k]);
    }
    CHECK(volume == lake.volume_m3);
    CHECK(lake.max_depth_m == pour - z_min);
    const auto conn = reachable(lake, seed);
    for (std::size_t k = 0; k < dem.values.size(); ++k)
      if (lake.mask.zone[k] == 1) CHECK(conn[k]);
    if (i > 1) {
      for (std::size_t k = 0; k < dem.values.size(); ++k)
        if (previous.mask.zone[k] == 1) CHECK(lake.mask.zone[k] == 1);
      CHECK(lake.area_m2 >= previous.area_m2);
      CHECK(lake.volume_m3 >= previous.volume_m3);
    }
    previous = lake;
  }
}

TEST_CASE("nodata blocks, diagonal gaps do not leak, boundary is flagged") {
  Raster dem(grid(9, 9, 1.0), 10.0);
  for (std::size_t r = 1; r < 8; ++r)
    for (std::size_t c = 1; c < 8; ++c) dem.at(r, c) = 1.0;
  // Wall down column 4 with one diagonal-only gap.
  for (std::size_t r = 1; r < 8; ++r) dem.at(r, 4) = 10.0;
  dem.at(3, 4) = dem.spec.nodata;
  const auto lake = fill_lake(dem, {1.5, 4.5}, 5.0);
  CHECK(lake.cell_count == 7 * 3);
  CHECK_FALSE(lake.touched_boundary);

  const auto leak = fill_lake(dem, {1.5, 4.5}, 11.0);
  CHECK(leak.touched_boundary);

  CHECK_THROWS_AS(fill_lake(dem, {4.5, 5.5}, 5.0), Error);   // nodata seed
  CHECK_THROWS_AS(fill_lake(dem, {-3, 2}, 5.0), Error);      // off grid
}

TEST_CASE("pour search: bowl rim") {
  Raster dem = paraboloid(1.0);
  for (auto& z : dem.values) z = std::min(z, 4.0);
  const auto lake = find_pour_elevation(dem, {0.2, 0.2}, square(-25, -25, 25, 25));
  CHECK(std::abs(lake.pour_elevation_m - 4.0) <= 0.01);
  CHECK(lake.pour_elevation_m <= 4.0);
  CHECK(lake.cell_count > 0);
}

TEST_CASE("pour search: containment tangent to a lower saddle") {
  // Two basins along x separated by a ridge with a saddle at 6 m; rim at 7 m.
  const auto s = grid(80, 40, 1.0);
  const auto dem = sample_grid(s, [](double x, double y) {
    const double rim = 7.0;
    if (x < 3 || x > 77 || y < 3 || y > 37) return rim;
    const double ridge = std::abs(x - 40.0) < 1.5 ? (std::abs(y - 20.0) < 3 ? 6.0 : rim) : 0.0;
    return ridge > 0 ? ridge : 1.0 + 0.001 * std::abs(y - 20.0);
  });
  const auto containment = square(0, 0, 39.0, 40);  // ends where the saddle begins
  const auto lake = find_pour_elevation(dem, {20, 20}, containment);
  CHECK(std::abs(lake.pour_elevation_m - 6.0) <= 0.01);
}

TEST_CASE("pour search: peak seed has no positive-depth fill") {
  const auto s = grid(21, 21, 1.0);
  const auto dem = sample_grid(s, [](double x, double y) { return 50 - std::hypot(x - 10.5, y - 10.5); });
  CHECK_THROWS_AS(find_pour_elevation(dem, {10.5, 10.5}, square(5, 5, 16, 16)), Error);
  CHECK_THROWS_AS(find_pour_elevation(dem, {1, 1}, square(5, 5, 16, 16)), Error);
}

TEST_CASE("lake outputs") {
  Raster dem(grid(6, 6, 1.0), 10.0);
  dem.at(2, 2) = dem.at(2, 3) = 9.0;
  const auto lake = fill_lake(dem, {2.5, 3.5}, 9.5);
  const auto r = lake_raster(lake);
  CHECK(r.kind == RasterKind::categorical);
  CHECK(r.at(2, 2) == 1.0);
  CHECK(r.at(2, 3) == 1.0);
  CHECK(r.is_nodata(0, 0));
  const auto csv = lake_csv({lake});
  CHECK(csv.rows.size() == 1);
  CHECK(csv.header.front() == "pour_elevation_m");
}
