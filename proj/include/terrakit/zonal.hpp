#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "terrakit/csv.hpp"
#include "terrakit/raster.hpp"
#include "terrakit/vector_io.hpp"

namespace terrakit {

inline constexpr std::int32_t kNoZone = -1;

/// Per-cell zone membership on a grid shared with the analyzed rasters.
struct ZoneMask {
  GridSpec spec;
  std::vector<std::int32_t> zone;  ///< kNoZone for cells outside every zone

  ZoneMask() = default;
  explicit ZoneMask(const GridSpec& s) : spec(s), zone(s.cell_count(), kNoZone) {}

  bool contains(std::size_t k, std::int32_t id) const { return zone[k] == id; }
  std::size_t count(std::int32_t id) const;
};

/// Marks cells whose center lies inside the polygon (even-odd over all rings)
/// with `zone_id`. Centers on left/bottom edges are inside, on right/top edges
/// outside. Throws Error(degenerate) for zero-area polygons.
ZoneMask rasterize_polygon(const Geometry& polygon, const GridSpec& spec, std::int32_t zone_id = 1);

/// Same, but writes into an existing mask (later polygons overwrite earlier ones).
void burn_polygon(const Geometry& polygon, ZoneMask& mask, std::int32_t zone_id);

/// Every cell in zone `zone_id`.
ZoneMask whole_grid_mask(const GridSpec& spec, std::int32_t zone_id = 1);

/// min/max/mean/population standard deviation over a set of cells.
struct Moments {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct ZonalStats {
  std::string zone;
  std::size_t cell_count = 0;
  double area_m2 = 0.0;
  double area_ha = 0.0;
  double area_km2 = 0.0;
  /// Polygon geometry metrics; absent for the whole-raster row.
  std::optional<double> perimeter_km;
  std::optional<double> long_axis_km;
  std::optional<double> short_axis_km;
  Moments altitude;
  double alt_amplitude = 0.0;
  std::optional<Moments> slope;
  /// Circular mean of non-flat aspect cells, [0, 360); absent if all flat.
  std::optional<double> aspect_mean_deg;
};

struct MorphometryRasters {
  const Raster& dem;
  const Raster& slope;
  const Raster& aspect;
};

/// Statistics over masked cells; nodata cells are skipped per raster. Area is
/// cell_count * cellsize^2 where cell_count counts masked non-nodata DEM cells.
/// `polygon` (optional) supplies perimeter and axes.
ZonalStats zonal_stats(const MorphometryRasters& rasters, const ZoneMask& mask, std::int32_t zone_id,
                       const Geometry* polygon = nullptr, std::string zone_name = {});

/// Moments of one raster over a zone; nullopt if no masked non-nodata cell.
std::optional<Moments> masked_moments(const Raster& raster, const ZoneMask& mask, std::int32_t zone_id);

/// Circular mean of angles in degrees, in [0, 360); nullopt for an empty set or
/// a vanishing resultant.
std::optional<double> circular_mean_deg(std::span<const double> degrees);

struct Histogram {
  std::vector<double> breaks;
  std::vector<std::size_t> counts;  ///< counts[i] covers [breaks[i], breaks[i+1])
  std::size_t underflow = 0;        ///< below breaks.front()
  std::size_t overflow = 0;         ///< at or above breaks.back()
  std::size_t total() const;
};

/// Half-open bins over non-nodata cells, optionally restricted to a zone.
Histogram histogram(const Raster& raster, std::span<const double> breaks,
                    const ZoneMask* mask = nullptr, std::int32_t zone_id = 1);

/// Evenly spaced breaks from `low` to at least `high`, `width` apart.
std::vector<double> uniform_breaks(double low, double high, double width);

/// One row per polygon (input order), then the whole-raster row named "entire_area".
std::vector<ZonalStats> zonal_table(const MorphometryRasters& rasters, const VectorLayer& polygons,
                                    const std::string& name_property = "name");

CsvTable zonal_csv(const std::vector<ZonalStats>& rows);
CsvTable histogram_csv(const Histogram& histogram);

}  // namespace terrakit
