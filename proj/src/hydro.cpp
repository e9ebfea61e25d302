#include "terrakit/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "terrakit/error.hpp"
#include "terrakit/geometry.hpp"

namespace terrakit {
namespace {

CellIndex seed_cell(const Raster& dem, GeoPoint seed) {
  const auto cell = dem.spec.cell_of(seed.x, seed.y);
  if (!cell) throw Error(Errc::invalid_input, "lake seed lies outside the grid");
  if (dem.is_nodata(cell->row, cell->col)) {
    throw Error(Errc::invalid_input, "lake seed lies on a nodata cell");
  }
  return *cell;
}

}  // namespace

LakeResult fill_lake(const Raster& dem, GeoPoint seed, double pour_elevation_m) {
  if (!std::isfinite(pour_elevation_m)) {
    throw Error(Errc::invalid_input, "pour elevation must be finite");
  }
  const CellIndex start = seed_cell(dem, seed);
  const auto& s = dem.spec;
  LakeResult lake;
  lake.mask = ZoneMask(s);
  lake.pour_elevation_m = pour_elevation_m;
  if (!(dem.at(start.row, start.col) < pour_elevation_m)) return lake;

  auto wet = [&](std::size_t k) {
    const double z = dem.values[k];
    return !dem.is_nodata(z) && z < pour_elevation_m;
  };
  std::deque<std::size_t> queue;
  const std::size_t first = start.row * s.ncols + start.col;
  lake.mask.zone[first] = 1;
  queue.push_back(first);
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const std::size_t r = k / s.ncols, c = k % s.ncols;
    if (r == 0 || c == 0 || r + 1 == s.nrows || c + 1 == s.ncols) lake.touched_boundary = true;
    auto visit = [&](std::size_t n) {
      if (lake.mask.zone[n] == kNoZone && wet(n)) {
        lake.mask.zone[n] = 1;
        queue.push_back(n);
      }
    };
    if (r > 0) visit(k - s.ncols);
    if (r + 1 < s.nrows) visit(k + s.ncols);
    if (c > 0) visit(k - 1);
    if (c + 1 < s.ncols) visit(k + 1);
  }

  const double cell_area = s.cellsize * s.cellsize;
  double z_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lake.mask.zone.size(); ++k) {
    if (lake.mask.zone[k] != 1) continue;
    const double z = dem.values[k];
    ++lake.cell_count;
    lake.volume_m3 += (pour_elevation_m - z) * cell_area;
    z_min = std::min(z_min, z);
  }
  lake.area_m2 = static_cast<double>(lake.cell_count) * cell_area;
  lake.max_depth_m = pour_elevation_m - z_min;
  return lake;
}

LakeResult find_pour_elevation(const Raster& dem, GeoPoint seed, const Geometry& containment,
                               double tolerance_m) {
  if (!(tolerance_m > 0.0)) throw Error(Errc::invalid_input, "pour tolerance must be positive");
  if (!geometry::point_in_polygon(containment, seed)) {
    throw Error(Errc::invalid_input, "lake seed lies outside the containment polygon");
  }
  const CellIndex start = seed_cell(dem, seed);
  const ZoneMask inside = rasterize_polygon(containment, dem.spec, 1);

  auto fits = [&](const LakeResult& lake) {
    if (lake.touched_boundary) return false;
    for (std::size_t k = 0; k < inside.zone.size(); ++k) {
      if (lake.mask.zone[k] == 1 && inside.zone[k] != 1) return false;
    }
    return true;
  };

  double hi = -std::numeric_limits<double>::infinity();
  for (double z : dem.values) {
    if (!dem.is_nodata(z)) hi = std::max(hi, z);
  }
  hi += 1.0;
  const double floor_z = dem.at(start.row, start.col);
  double lo = floor_z;
  LakeResult best = fill_lake(dem, seed, lo);
  LakeResult top = fill_lake(dem, seed, hi);
  if (fits(top)) return top;
  while (hi - lo > tolerance_m) {
    const double mid = lo + (hi - lo) / 2.0;
    LakeResult trial = fill_lake(dem, seed, mid);
    if (fits(trial)) {
      lo = mid;
      best = std::move(trial);
    } else {
      hi = mid;
    }
  }
  if (best.cell_count == 0) {
    throw Error(Errc::degenerate, "no positive-depth fill stays inside the containment polygon");
  }
  return best;
}

Raster lake_raster(const LakeResult& lake) {
  Raster out(lake.mask.spec, lake.mask.spec.nodata, RasterKind::categorical);
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    if (lake.mask.zone[k] == 1) out.values[k] = 1.0;
  }
  return out;
}

CsvTable lake_csv(const std::vector<LakeResult>& lakes) {
  CsvTable t;
  t.header = {"pour_elevation_m", "area_m2", "volume_m3", "max_depth_m", "cell_count",
              "touched_boundary"};
  for (const auto& l : lakes) {
    t.rows.push_back({l.pour_elevation_m, l.area_m2, l.volume_m3, l.max_depth_m,
                      static_cast<std::int64_t>(l.cell_count),
                      static_cast<std::int64_t>(l.touched_boundary ? 1 : 0)});
  }
  return t;
}

}  // namespace terrakit
