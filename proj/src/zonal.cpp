#include "terrakit/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "terrakit/error.hpp"
#include "terrakit/geometry.hpp"

namespace terrakit {
namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw Error(Errc::invalid_input, std::string("grid spec mismatch: ") + what);
}

std::string zone_label(const Feature& f, const std::string& key, std::size_t index) {
  if (auto s = f.text(key)) return *s;
  if (auto n = f.number(key)) {
    std::string s = std::to_string(*n);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
  return "zone_" + std::to_string(index + 1);
}

CsvCell opt(const std::optional<double>& v) {
  return v ? CsvCell{*v} : CsvCell{};
}

}  // namespace

std::size_t ZoneMask::count(std::int32_t id) const {
  return static_cast<std::size_t>(std::count(zone.begin(), zone.end(), id));
}

void burn_polygon(const Geometry& polygon, ZoneMask& mask, std::int32_t zone_id) {
  if (polygon.kind != GeometryKind::polygon) {
    throw Error(Errc::kind_mismatch, "zone geometry must be a polygon");
  }
  if (!(geometry::polygon_area(polygon) > 0.0)) {
    throw Error(Errc::degenerate, "zone polygon has zero area");
  }
  const auto& s = mask.spec;
  std::vector<double> crossings;
  for (std::size_t r = 0; r < s.nrows; ++r) {
    const double yc = s.cell_center(r, 0).y;
    crossings.clear();
    for (const auto& ring : polygon.parts) {
      for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const GeoPoint a = ring[i], b = ring[i + 1];
        if ((a.y <= yc) == (b.y <= yc)) continue;
        crossings.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    if (crossings.empty()) continue;
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      const double x0 = crossings[k], x1 = crossings[k + 1];
      // Centers in [x0, x1).
      double start = std::floor((x0 - s.xll) / s.cellsize - 0.5);
      std::size_t c = start <= 0.0 ? 0 : static_cast<std::size_t>(start);
      for (; c < s.ncols; ++c) {
        const double xc = s.cell_center(r, c).x;
        if (xc < x0) continue;
        if (xc >= x1) break;
        mask.zone[r * s.ncols + c] = zone_id;
      }
    }
  }
}

ZoneMask rasterize_polygon(const Geometry& polygon, const GridSpec& spec, std::int32_t zone_id) {
  spec.validate();
  ZoneMask mask(spec);
  burn_polygon(polygon, mask, zone_id);
  return mask;
}

ZoneMask whole_grid_mask(const GridSpec& spec, std::int32_t zone_id) {
  ZoneMask mask(spec);
  std::fill(mask.zone.begin(), mask.zone.end(), zone_id);
  return mask;
}

std::optional<Moments> masked_moments(const Raster& raster, const ZoneMask& mask,
                                      std::int32_t zone_id) {
  require_same_grid(raster.spec, mask.spec, "raster vs zone mask");
  Moments m;
  m.min = std::numeric_limits<double>::infinity();
  m.max = -std::numeric_limits<double>::infinity();
  CompensatedSum sum;
  for (std::size_t k = 0; k < raster.values.size(); ++k) {
    const double v = raster.values[k];
    if (mask.zone[k] != zone_id || raster.is_nodata(v)) continue;
    m.min = std::min(m.min, v);
    m.max = std::max(m.max, v);
    sum.add(v);
    ++m.count;
  }
  if (m.count == 0) return std::nullopt;
  const double n = static_cast<double>(m.count);
  if (m.min == m.max) {
    m.mean = m.min;
    m.stddev = 0.0;
    return m;
  }
  m.mean = std::clamp(sum.value() / n, m.min, m.max);
  CompensatedSum squares;
  for (std::size_t k = 0; k < raster.values.size(); ++k) {
    const double v = raster.values[k];
    if (mask.zone[k] != zone_id || raster.is_nodata(v)) continue;
    const double d = v - m.mean;
    squares.add(d * d);
  }
  m.stddev = std::sqrt(squares.value() / n);
  return m;
}

std::optional<double> circular_mean_deg(std::span<const double> degrees) {
  if (degrees.empty()) return std::nullopt;
  CompensatedSum s, c;
  for (double d : degrees) {
    const double r = d * std::numbers::pi / 180.0;
    s.add(std::sin(r));
    c.add(std::cos(r));
  }
  const double sy = s.value(), cx = c.value();
  if (std::hypot(sy, cx) <= 1e-12 * static_cast<double>(degrees.size())) return std::nullopt;
  double mean = std::atan2(sy, cx) * 180.0 / std::numbers::pi;
  if (mean < 0.0) mean += 360.0;
  if (mean >= 360.0) mean -= 360.0;
  return mean + 0.0;
}

ZonalStats zonal_stats(const MorphometryRasters& rasters, const ZoneMask& mask,
                       std::int32_t zone_id, const Geometry* polygon, std::string zone_name) {
  require_same_grid(rasters.dem.spec, mask.spec, "DEM vs zone mask");
  require_same_grid(rasters.slope.spec, mask.spec, "slope vs zone mask");
  require_same_grid(rasters.aspect.spec, mask.spec, "aspect vs zone mask");

  ZonalStats out;
  out.zone = std::move(zone_name);
  const auto alt = masked_moments(rasters.dem, mask, zone_id);
  if (!alt) throw Error(Errc::degenerate, "zone '" + out.zone + "' covers no DEM data cells");
  out.altitude = *alt;
  out.alt_amplitude = alt->max - alt->min;
  out.cell_count = alt->count;
  const double cs = mask.spec.cellsize;
  out.area_m2 = static_cast<double>(out.cell_count) * cs * cs;
  out.area_km2 = out.area_m2 / 1e6;
  out.area_ha = 100.0 * out.area_km2;
  out.slope = masked_moments(rasters.slope, mask, zone_id);

  std::vector<double> azimuths;
  for (std::size_t k = 0; k < rasters.aspect.values.size(); ++k) {
    const double v = rasters.aspect.values[k];
    if (mask.zone[k] != zone_id || rasters.aspect.is_nodata(v) || v < 0.0) continue;
    azimuths.push_back(v);
  }
  out.aspect_mean_deg = circular_mean_deg(azimuths);

  if (polygon) {
    out.perimeter_km = geometry::polygon_perimeter(*polygon) / 1000.0;
    out.long_axis_km = geometry::diameter(polygon->outer()) / 1000.0;
    out.short_axis_km = geometry::min_area_rect(polygon->outer()).width / 1000.0;
  }
  return out;
}

std::size_t Histogram::total() const {
  std::size_t t = underflow + overflow;
  for (auto c : counts) t += c;
  return t;
}

Histogram histogram(const Raster& raster, std::span<const double> breaks, const ZoneMask* mask,
                    std::int32_t zone_id) {
  if (breaks.size() < 2) throw Error(Errc::invalid_input, "histogram needs at least two breaks");
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (!(breaks[i] > breaks[i - 1])) {
      throw Error(Errc::invalid_input, "histogram breaks must be strictly ascending");
    }
  }
  if (mask) require_same_grid(raster.spec, mask->spec, "raster vs zone mask");
  Histogram h;
  h.breaks.assign(breaks.begin(), breaks.end());
  h.counts.assign(breaks.size() - 1, 0);
  for (std::size_t k = 0; k < raster.values.size(); ++k) {
    const double v = raster.values[k];
    if (raster.is_nodata(v)) continue;
    if (mask && mask->zone[k] != zone_id) continue;
    const auto pos = std::upper_bound(breaks.begin(), breaks.end(), v) - breaks.begin();
    if (pos == 0) {
      ++h.underflow;
    } else if (static_cast<std::size_t>(pos) == breaks.size()) {
      ++h.overflow;
    } else {
      ++h.counts[static_cast<std::size_t>(pos) - 1];
    }
  }
  return h;
}

std::vector<double> uniform_breaks(double low, double high, double width) {
  if (!(width > 0.0) || !std::isfinite(low) || !std::isfinite(high) || high < low) {
    throw Error(Errc::invalid_input, "uniform_breaks: need finite low <= high and width > 0");
  }
  const double start = std::floor(low / width) * width;
  std::vector<double> out;
  for (std::size_t i = 0;; ++i) {
    const double b = start + static_cast<double>(i) * width;
    out.push_back(b);
    if (b > high) break;
  }
  if (out.size() < 2) out.push_back(start + width);
  return out;
}

std::vector<ZonalStats> zonal_table(const MorphometryRasters& rasters, const VectorLayer& polygons,
                                    const std::string& name_property) {
  if (polygons.features.empty()) throw Error(Errc::invalid_input, "zonal_table needs a polygon");
  std::vector<ZonalStats> rows;
  rows.reserve(polygons.features.size() + 1);
  for (std::size_t i = 0; i < polygons.features.size(); ++i) {
    const auto& f = polygons.features[i];
    const auto mask = rasterize_polygon(f.geometry, rasters.dem.spec, 1);
    rows.push_back(zonal_stats(rasters, mask, 1, &f.geometry, zone_label(f, name_property, i)));
  }
  const auto all = whole_grid_mask(rasters.dem.spec, 1);
  rows.push_back(zonal_stats(rasters, all, 1, nullptr, "entire_area"));
  return rows;
}

CsvTable zonal_csv(const std::vector<ZonalStats>& rows) {
  CsvTable t;
  t.header = {"zone",          "area_km2",       "area_ha",        "perimeter_km",
              "long_axis_km",  "short_axis_km",  "alt_min_m",      "alt_max_m",
              "alt_mean_m",    "alt_amplitude_m", "alt_stddev",    "slope_min_deg",
              "slope_max_deg", "slope_mean_deg", "slope_stddev",   "aspect_mean_deg",
              "cell_count"};
  for (const auto& r : rows) {
    std::vector<CsvCell> row = {r.zone,
                                r.area_km2,
                                r.area_ha,
                                opt(r.perimeter_km),
                                opt(r.long_axis_km),
                                opt(r.short_axis_km),
                                r.altitude.min,
                                r.altitude.max,
                                r.altitude.mean,
                                r.alt_amplitude,
                                r.altitude.stddev};
    if (r.slope) {
      row.insert(row.end(), {r.slope->min, r.slope->max, r.slope->mean, r.slope->stddev});
    } else {
      row.insert(row.end(), {CsvCell{}, CsvCell{}, CsvCell{}, CsvCell{}});
    }
    row.push_back(opt(r.aspect_mean_deg));
    row.push_back(static_cast<std::int64_t>(r.cell_count));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable histogram_csv(const Histogram& h) {
  CsvTable t;
  t.header = {"bin_low", "bin_high", "count"};
  t.rows.push_back({CsvCell{}, h.breaks.front(), static_cast<std::int64_t>(h.underflow)});
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    t.rows.push_back({h.breaks[i], h.breaks[i + 1], static_cast<std::int64_t>(h.counts[i])});
  }
  t.rows.push_back({h.breaks.back(), CsvCell{}, static_cast<std::int64_t>(h.overflow)});
  return t;
}

}  // namespace terrakit
