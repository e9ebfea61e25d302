#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "terrakit/raster.hpp"
#include "terrakit/vector_io.hpp"

namespace terrakit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs one subcommand and maps failures to exit codes:
/// 0 success, 1 runtime error (diagnostic on `err`), 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct DemBuildOptions {
  std::filesystem::path contours;
  std::optional<std::filesystem::path> spot_heights;
  std::string elevation_property = "elevation";
  double cellsize = kDefaultCellsize;
  /// xmin, ymin, xmax, ymax; absent means the bounding box of the vertices.
  std::optional<std::array<double, 4>> bounds;
  double flat_tolerance = 1e-6;
  bool repair = true;
  unsigned workers = 0;
};

struct DemBuild {
  Raster dem;
  std::size_t vertices = 0;
  std::size_t triangles = 0;
  std::size_t flat_before = 0;
  std::size_t flips = 0;
  std::size_t steiner_points = 0;
  std::size_t unfixable = 0;
};

DemBuild build_dem(const DemBuildOptions& options);

struct PipelineConfig {
  DemBuildOptions dem;
  std::optional<std::filesystem::path> enclosures;
  std::optional<std::filesystem::path> profiles;
  std::string name_property = "name";

  double flat_threshold = 1e-8;
  std::vector<double> hypsometry_breaks;
  double sun_azimuth_deg = 315.0;
  double sun_altitude_deg = 45.0;

  double altitude_bin_m = 1.0;
  double slope_bin_deg = 1.0;
  double aspect_bin_deg = 45.0;

  std::optional<double> profile_step_m;  ///< defaults to the cellsize
  double window_m = 20.0;
  double min_drop_m = 0.5;

  std::optional<GeoPoint> lake_seed;
  std::optional<double> lake_pour_m;  ///< fixed level; otherwise searched
  std::optional<std::filesystem::path> lake_containment;
  double pour_tolerance_m = 0.01;

  std::filesystem::path output_dir;
  bool render = true;
};

/// Reads and validates a pipeline config; every referenced input must exist.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace terrakit::cli
