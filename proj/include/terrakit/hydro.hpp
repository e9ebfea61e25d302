#pragma once

#include <cstddef>

#include "terrakit/csv.hpp"
#include "terrakit/raster.hpp"
#include "terrakit/vector_io.hpp"
#include "terrakit/zonal.hpp"

namespace terrakit {

struct LakeResult {
  ZoneMask mask;  ///< lake cells carry zone id 1
  double pour_elevation_m = 0.0;
  double area_m2 = 0.0;
  double volume_m3 = 0.0;
  double max_depth_m = 0.0;
  std::size_t cell_count = 0;
  bool touched_boundary = false;  ///< the fill reached an edge row or column
};

/// 4-connected flood fill from the seed cell over cells strictly below the pour
/// elevation; nodata blocks. Volume is the row-major sum of
/// (pour - z) * cellsize^2 over lake cells. A seed at or above the pour level
/// gives an empty lake. Throws Error(invalid_input) for a seed off the grid and
/// for a seed on nodata.
LakeResult fill_lake(const Raster& dem, GeoPoint seed, double pour_elevation_m);

/// Highest pour elevation (found by bisection to `tolerance_m`) whose fill
/// stays inside the containment polygon without touching the grid edge.
/// Throws Error(degenerate) when no positive-depth fill fits.
LakeResult find_pour_elevation(const Raster& dem, GeoPoint seed, const Geometry& containment,
                               double tolerance_m = 0.01);

/// 1 on lake cells, nodata elsewhere.
Raster lake_raster(const LakeResult& lake);

/// Scenario log: one row per fill.
CsvTable lake_csv(const std::vector<LakeResult>& lakes);

}  // namespace terrakit
