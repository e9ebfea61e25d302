#include "terrakit/morphometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "terrakit/error.hpp"
#include "terrakit/parallel.hpp"

namespace terrakit {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_kernel_size(const Raster& dem) {
  if (dem.spec.nrows < 3 || dem.spec.ncols < 3) {
    throw Error(Errc::invalid_input, "grid must be at least 3 x 3 for a 3x3 kernel");
  }
}

// Pairwise-symmetric grouping keeps the gradient bit-exact under 90 degree
// rotations of the grid: (a + g) == (g + a) in IEEE arithmetic.
inline bool horn(const double* above, const double* here, const double* below, std::size_t c,
                 double nodata, double inv_8cs, Gradient& g) {
  const double a = above[c - 1], b = above[c], cc = above[c + 1];
  const double d = here[c - 1], f = here[c + 1];
  const double gg = below[c - 1], h = below[c], i = below[c + 1];
  if (a == nodata || b == nodata || cc == nodata || d == nodata || here[c] == nodata ||
      f == nodata || gg == nodata || h == nodata || i == nodata) {
    return false;
  }
  g.dzdx = (((cc + i) + 2.0 * f) - ((a + gg) + 2.0 * d)) * inv_8cs;
  g.dzdy = (((a + cc) + 2.0 * b) - ((gg + i) + 2.0 * h)) * inv_8cs;
  return true;
}

/// Azimuth of steepest descent, clockwise from north, in [0, 360).
inline double downslope_azimuth(const Gradient& g) {
  double az = std::atan2(-g.dzdx, -g.dzdy) * kRadToDeg;
  if (az < 0.0) az += 360.0;
  if (az >= 360.0) az -= 360.0;
  return az + 0.0;  // no negative zero
}

template <class Kernel>
void for_each_interior(const Raster& dem, unsigned workers, Kernel&& kernel) {
  const auto& s = dem.spec;
  const double inv_8cs = 1.0 / (8.0 * s.cellsize);
  parallel_rows(s.nrows, workers, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = std::max<std::size_t>(r0, 1); r < std::min(r1, s.nrows - 1); ++r) {
      const double* above = dem.values.data() + (r - 1) * s.ncols;
      const double* here = above + s.ncols;
      const double* below = here + s.ncols;
      for (std::size_t c = 1; c + 1 < s.ncols; ++c) {
        Gradient g;
        if (horn(above, here, below, c, s.nodata, inv_8cs, g)) kernel(r * s.ncols + c, g);
      }
    }
  });
}

void check_code(double v, double max_code, const char* what) {
  if (v < 0.0 || v > max_code || v != std::floor(v)) {
    throw Error(Errc::invalid_input, std::string("invalid ") + what + " code " + std::to_string(v));
  }
}

}  // namespace

std::optional<Gradient> horn_gradient(const Raster& dem, std::size_t row, std::size_t col) {
  const auto& s = dem.spec;
  if (row == 0 || col == 0 || row + 1 >= s.nrows || col + 1 >= s.ncols) return std::nullopt;
  const double* above = dem.values.data() + (row - 1) * s.ncols;
  Gradient g;
  if (!horn(above, above + s.ncols, above + 2 * s.ncols, col, s.nodata, 1.0 / (8.0 * s.cellsize),
            g)) {
    return std::nullopt;
  }
  return g;
}

SlopeAspect slope_aspect(const Raster& dem, const GradientOptions& options) {
  require_kernel_size(dem);
  SlopeAspect out{Raster(dem.spec, dem.spec.nodata), Raster(dem.spec, dem.spec.nodata)};
  const double flat2 = options.flat_threshold * options.flat_threshold;
  for_each_interior(dem, options.workers, [&](std::size_t k, const Gradient& g) {
    const double m2 = g.dzdx * g.dzdx + g.dzdy * g.dzdy;
    if (m2 < flat2) {
      out.slope.values[k] = 0.0;
      out.aspect.values[k] = kFlatAspect;
    } else {
      out.slope.values[k] = std::atan(std::sqrt(m2)) * kRadToDeg;
      out.aspect.values[k] = downslope_azimuth(g);
    }
  });
  return out;
}

Raster slope(const Raster& dem, const GradientOptions& options) {
  require_kernel_size(dem);
  Raster out(dem.spec, dem.spec.nodata);
  const double flat2 = options.flat_threshold * options.flat_threshold;
  for_each_interior(dem, options.workers, [&](std::size_t k, const Gradient& g) {
    const double m2 = g.dzdx * g.dzdx + g.dzdy * g.dzdy;
    out.values[k] = m2 < flat2 ? 0.0 : std::atan(std::sqrt(m2)) * kRadToDeg;
  });
  return out;
}

Raster aspect(const Raster& dem, const GradientOptions& options) {
  require_kernel_size(dem);
  Raster out(dem.spec, dem.spec.nodata);
  const double flat2 = options.flat_threshold * options.flat_threshold;
  for_each_interior(dem, options.workers, [&](std::size_t k, const Gradient& g) {
    const double m2 = g.dzdx * g.dzdx + g.dzdy * g.dzdy;
    out.values[k] = m2 < flat2 ? kFlatAspect : downslope_azimuth(g);
  });
  return out;
}

AspectClass classify_aspect(double degrees) {
  if (degrees == kFlatAspect) return AspectClass::flat;
  if (!(degrees >= 0.0 && degrees < 360.0)) {
    throw Error(Errc::invalid_input, "aspect " + std::to_string(degrees) +
                                         " outside [0, 360) and not the flat value -1");
  }
  if (degrees >= 337.5 || degrees < 22.5) return AspectClass::N;
  // Lower bounds of NE..NW; comparisons against exact boundaries avoid rounding in (a + 22.5) / 45.
  static constexpr double lower[] = {22.5, 67.5, 112.5, 157.5, 202.5, 247.5, 292.5};
  int k = 0;
  while (k + 1 < 7 && degrees >= lower[k + 1]) ++k;
  return static_cast<AspectClass>(static_cast<int>(AspectClass::NE) + k);
}

ExposureClass exposure_of(AspectClass cls) noexcept {
  switch (cls) {
    case AspectClass::S:
    case AspectClass::SW: return ExposureClass::sunlit;
    case AspectClass::W:
    case AspectClass::SE: return ExposureClass::semi_sunlit;
    case AspectClass::E:
    case AspectClass::NE: return ExposureClass::semi_shaded;
    case AspectClass::N:
    case AspectClass::NW: return ExposureClass::shaded;
    case AspectClass::flat: return ExposureClass::flat;
  }
  return ExposureClass::flat;
}

Raster reclass_aspect_8(const Raster& aspect_raster) {
  Raster out(aspect_raster.spec, aspect_raster.spec.nodata, RasterKind::categorical);
  for (std::size_t k = 0; k < aspect_raster.values.size(); ++k) {
    const double v = aspect_raster.values[k];
    if (aspect_raster.is_nodata(v)) continue;
    out.values[k] = static_cast<double>(classify_aspect(v));
  }
  return out;
}

Raster reclass_exposure_4(const Raster& aspect_classes) {
  Raster out(aspect_classes.spec, aspect_classes.spec.nodata, RasterKind::categorical);
  for (std::size_t k = 0; k < aspect_classes.values.size(); ++k) {
    const double v = aspect_classes.values[k];
    if (aspect_classes.is_nodata(v)) continue;
    check_code(v, 8.0, "aspect class");
    out.values[k] = static_cast<double>(exposure_of(static_cast<AspectClass>(static_cast<int>(v))));
  }
  return out;
}

Raster hypsometric_classes(const Raster& dem, std::span<const double> breaks) {
  if (breaks.empty()) throw Error(Errc::invalid_input, "at least one break is required");
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (!(breaks[i] > breaks[i - 1])) {
      throw Error(Errc::invalid_input, "breaks must be strictly ascending");
    }
  }
  Raster out(dem.spec, dem.spec.nodata, RasterKind::categorical);
  for (std::size_t k = 0; k < dem.values.size(); ++k) {
    const double v = dem.values[k];
    if (dem.is_nodata(v)) continue;
    out.values[k] =
        static_cast<double>(std::upper_bound(breaks.begin(), breaks.end(), v) - breaks.begin());
  }
  return out;
}

Raster hillshade(const Raster& dem, const HillshadeOptions& options) {
  require_kernel_size(dem);
  if (!(options.altitude_deg > 0.0 && options.altitude_deg <= 90.0)) {
    throw Error(Errc::invalid_input, "sun altitude must lie in (0, 90] degrees");
  }
  const double az = options.azimuth_deg * kDegToRad;
  const double alt = options.altitude_deg * kDegToRad;
  // Unit vector towards the sun in (east, north, up).
  const double sx = std::sin(az) * std::cos(alt);
  const double sy = std::cos(az) * std::cos(alt);
  const double sz = std::sin(alt);

  Raster out(dem.spec, dem.spec.nodata);
  for_each_interior(dem, options.workers, [&](std::size_t k, const Gradient& g) {
    const double norm = std::sqrt(g.dzdx * g.dzdx + g.dzdy * g.dzdy + 1.0);
    const double lambert = (-g.dzdx * sx - g.dzdy * sy + sz) / norm;
    out.values[k] = std::clamp(255.0 * lambert, 0.0, 255.0);
  });
  return out;
}

const char* to_string(AspectClass cls) noexcept {
  static constexpr const char* names[] = {"flat", "N", "NE", "E", "SE", "S", "SW", "W", "NW"};
  return names[static_cast<int>(cls)];
}

const char* to_string(ExposureClass cls) noexcept {
  static constexpr const char* names[] = {"flat", "sunlit", "semi-sunlit", "semi-shaded",
                                          "shaded"};
  return names[static_cast<int>(cls)];
}

}  // namespace terrakit
