#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "terrakit/vector_io.hpp"

namespace terrakit {

class Tin;

inline constexpr double kDefaultNodata = -9999.0;
inline constexpr double kDefaultCellsize = 2.0;
inline constexpr std::uint64_t kDefaultMaxCells = std::uint64_t{1} << 31;

struct CellIndex {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Grid geometry. Row 0 is the northernmost row; (xll, yll) is the lower-left
/// corner of the lower-left cell.
struct GridSpec {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double xll = 0.0;
  double yll = 0.0;
  double cellsize = kDefaultCellsize;
  double nodata = kDefaultNodata;

  std::size_t cell_count() const { return ncols * nrows; }
  double x_max() const { return xll + static_cast<double>(ncols) * cellsize; }
  double y_max() const { return yll + static_cast<double>(nrows) * cellsize; }

  GeoPoint cell_center(std::size_t row, std::size_t col) const {
    return {xll + (static_cast<double>(col) + 0.5) * cellsize,
            yll + (static_cast<double>(nrows - row) - 0.5) * cellsize};
  }

  /// Cell containing (x, y); west and south cell edges belong to the cell.
  std::optional<CellIndex> cell_of(double x, double y) const;

  /// Throws Error(invalid_input) unless cellsize > 0, the grid is non-empty,
  /// the cell count is within `max_cells` and all numbers are finite.
  void validate(std::uint64_t max_cells = kDefaultMaxCells) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Smallest grid of the given cellsize, snapped to multiples of cellsize,
/// that covers the bounding box.
GridSpec grid_covering(double min_x, double min_y, double max_x, double max_y, double cellsize,
                       double nodata = kDefaultNodata);

enum class RasterKind { continuous, categorical };

/// Row-major, north-up grid of doubles. Every value is finite or exactly `spec.nodata`.
struct Raster {
  GridSpec spec;
  std::vector<double> values;
  RasterKind kind = RasterKind::continuous;

  Raster() = default;
  Raster(GridSpec s, double fill, RasterKind k = RasterKind::continuous)
      : spec(s), values(s.cell_count(), fill), kind(k) {}

  double& at(std::size_t row, std::size_t col) { return values[row * spec.ncols + col]; }
  double at(std::size_t row, std::size_t col) const { return values[row * spec.ncols + col]; }
  bool is_nodata(double v) const { return v == spec.nodata; }
  bool is_nodata(std::size_t row, std::size_t col) const { return is_nodata(at(row, col)); }
};

/// Samples the TIN at every cell center; cells outside the hull get nodata.
/// Rows are split across `workers` threads (0 = hardware concurrency); the
/// result does not depend on the worker count.
Raster rasterize_tin(const Tin& tin, const GridSpec& spec, unsigned workers = 0);

// ESRI ASCII grid ------------------------------------------------------------------

inline constexpr int kAsciiGridDecimals = 6;

/// Six header lines then nrows lines of ncols values, six decimals each; nodata
/// cells are written with the same token as the header's NODATA_value.
std::string format_ascii_grid(const Raster& raster);
Raster parse_ascii_grid(std::string_view text);

void write_ascii_grid(const Raster& raster, const std::filesystem::path& path);
Raster read_ascii_grid(const std::filesystem::path& path);

/// The value a raster cell holds after a write/read cycle.
double quantize_for_ascii(double value);

// Statistics -----------------------------------------------------------------------

struct RasterSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

/// Single pass over non-nodata cells; the mean uses Neumaier-compensated summation.
/// Throws Error(degenerate) when every cell is nodata.
RasterSummary raster_minmax_mean(const Raster& raster);

/// Running sum with Neumaier compensation.
class CompensatedSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace terrakit
