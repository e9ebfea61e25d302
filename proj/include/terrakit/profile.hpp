#pragma once

#include <optional>
#include <string>
#include <vector>

#include "terrakit/csv.hpp"
#include "terrakit/raster.hpp"
#include "terrakit/vector_io.hpp"

namespace terrakit {

struct ProfileSample {
  double distance_m = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> elevation_m;  ///< nullopt off-grid or next to nodata
};

struct ProfileSeries {
  std::vector<ProfileSample> samples;
  double step_m = 0.0;
  std::string source_id;

  double length() const { return samples.empty() ? 0.0 : samples.back().distance_m; }
};

/// Bilinear interpolation between the four surrounding cell centers.
std::optional<double> bilinear(const Raster& dem, double x, double y);

/// Samples at arc-length 0, step, 2*step, ... plus the end point.
ProfileSeries sample_profile(const Raster& dem, const Geometry& line, double step_m,
                             std::string source_id = {});

struct Knickpoint {
  double distance_m = 0.0;
  double drop_m = 0.0;  ///< upstream mean minus downstream mean
  double upstream_mean_m = 0.0;
  double downstream_mean_m = 0.0;
  double window_m = 0.0;
};

struct KnickOptions {
  double window_m = 20.0;
  double min_drop_m = 0.5;
};

/**
 * Split-window step detector. At each sample d whose windows [d - w, d) and
 * (d, d + w] both lie on the profile and contain only valid elevations,
 * drop = mean(upstream window) - mean(downstream window). Candidates with
 * |drop| >= min_drop are accepted greedily by decreasing |drop| (ties: smaller
 * distance first), suppressing any candidate within `window` of an accepted
 * one. Results are sorted by distance.
 */
std::vector<Knickpoint> detect_knickpoints(const ProfileSeries& profile,
                                           const KnickOptions& options = {});

CsvTable profile_csv(const ProfileSeries& profile);
CsvTable knickpoint_csv(const std::vector<Knickpoint>& knickpoints);

/// Reads a profile written by profile_csv (empty elevation = nodata).
ProfileSeries profile_from_csv(const std::vector<std::vector<std::string>>& rows);

}  // namespace terrakit
