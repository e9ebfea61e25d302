#pragma once

#include <cstdint>
#include <span>

#include "terrakit/raster.hpp"

namespace terrakit {

/// Eight compass sectors plus flat. Values are the raster codes.
enum class AspectClass : std::uint8_t { flat = 0, N, NE, E, SE, S, SW, W, NW };

/// Insolation grouping of aspect classes. Values are the raster codes.
enum class ExposureClass : std::uint8_t { flat = 0, sunlit, semi_sunlit, semi_shaded, shaded };

inline constexpr double kFlatAspect = -1.0;

struct GradientOptions {
  /// Gradient magnitude (m/m) below which a cell is flat: slope 0, aspect -1.
  double flat_threshold = 1e-8;
  unsigned workers = 0;
};

/// Horn (1981) 3x3 weighted differences. `dzdx` is positive uphill to the east,
/// `dzdy` positive uphill to the north.
struct Gradient {
  double dzdx = 0.0;
  double dzdy = 0.0;
};

/// Gradient at an interior cell; nullopt on the border or next to nodata.
std::optional<Gradient> horn_gradient(const Raster& dem, std::size_t row, std::size_t col);

/// Slope in degrees in [0, 90). Border and nodata-adjacent cells are nodata.
Raster slope(const Raster& dem, const GradientOptions& options = {});

/// Downslope azimuth in degrees clockwise from north, [0, 360); flat cells -1.
Raster aspect(const Raster& dem, const GradientOptions& options = {});

/// Both products from one pass over the gradients.
struct SlopeAspect {
  Raster slope;
  Raster aspect;
};
SlopeAspect slope_aspect(const Raster& dem, const GradientOptions& options = {});

/// Sector for one aspect value: N = [337.5, 360) u [0, 22.5), then 45 degree
/// half-open sectors clockwise. -1 maps to flat. Throws outside [0, 360).
AspectClass classify_aspect(double degrees);
ExposureClass exposure_of(AspectClass cls) noexcept;

/// Categorical rasters of AspectClass / ExposureClass codes; nodata preserved.
Raster reclass_aspect_8(const Raster& aspect);
Raster reclass_exposure_4(const Raster& aspect_classes);

/// Class i covers [breaks[i-1], breaks[i]); class 0 is below breaks[0] and class
/// breaks.size() is at or above the last break.
Raster hypsometric_classes(const Raster& dem, std::span<const double> breaks);

struct HillshadeOptions {
  double azimuth_deg = 315.0;
  double altitude_deg = 45.0;
  unsigned workers = 0;
};

/// Lambertian shaded relief in [0, 255] from Horn gradients.
Raster hillshade(const Raster& dem, const HillshadeOptions& options = {});

const char* to_string(AspectClass cls) noexcept;
const char* to_string(ExposureClass cls) noexcept;

}  // namespace terrakit
