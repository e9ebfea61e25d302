#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "terrakit/error.hpp"

namespace terrakit {

/// Planar coordinate in meters (easting, northing). No projection handling.
struct GeoPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

enum class GeometryKind { point, polyline, polygon };

/**
 * @brief A single Point, LineString or Polygon.
 *
 * `parts` holds one entry for points and polylines. For polygons, parts[0]
 * is the outer ring and any further parts are holes; every ring is stored
 * closed (first vertex repeated last), as in GeoJSON.
 */
struct Geometry {
  GeometryKind kind = GeometryKind::point;
  std::vector<std::vector<GeoPoint>> parts;

  static Geometry point(GeoPoint p);
  static Geometry polyline(std::vector<GeoPoint> path);
  static Geometry polygon(std::vector<GeoPoint> outer_ring,
                          std::vector<std::vector<GeoPoint>> holes = {});

  const std::vector<GeoPoint>& path() const { return parts.front(); }
  const std::vector<GeoPoint>& outer() const { return parts.front(); }
};

using PropertyValue = std::variant<double, std::string>;

struct Feature {
  Geometry geometry;
  std::map<std::string, PropertyValue> properties;

  std::optional<double> number(const std::string& key) const;
  std::optional<std::string> text(const std::string& key) const;
};

enum class LayerKind { contours, spot_heights, polygons, polylines };

const char* to_string(LayerKind kind) noexcept;
LayerKind layer_kind_from_string(std::string_view name);
GeometryKind expected_geometry(LayerKind kind) noexcept;

struct VectorLayer {
  LayerKind kind = LayerKind::polylines;
  std::vector<Feature> features;
};

struct LoadOptions {
  std::string elevation_property = "elevation";
};

/// Why one input feature was not accepted; `feature_index` is its position in the file.
struct FeatureDiagnostic {
  std::size_t feature_index = 0;
  Errc code = Errc::invalid_input;
  std::string message;
};

/// Result of a lenient parse: every input feature ends up in exactly one of the two lists.
struct LayerReport {
  VectorLayer layer;
  std::vector<FeatureDiagnostic> rejected;
  std::size_t input_count = 0;
};

/// Parses a GeoJSON FeatureCollection and sorts features into accepted/rejected.
/// Throws Error(parse) only when the document as a whole is unusable.
LayerReport inspect_vector_layer(std::string_view geojson, LayerKind expected,
                                 const LoadOptions& options = {});

/// Strict loader: any rejected feature aborts with a diagnostic naming every
/// offending feature index. Kind mismatches raise Errc::kind_mismatch.
VectorLayer parse_vector_layer(std::string_view geojson, LayerKind expected,
                               const LoadOptions& options = {});
VectorLayer load_vector_layer(const std::filesystem::path& path, LayerKind expected,
                              const LoadOptions& options = {});

/// Serializes a layer as a FeatureCollection carrying a `crs_note` member.
/// Coordinates use shortest round-trip formatting, so a reload is bit-identical.
std::string dump_vector_layer(const VectorLayer& layer);
void write_vector_layer(const VectorLayer& layer, const std::filesystem::path& path);

/// Throws Error(invalid_input) if the geometry breaks the ring/path rules.
void validate_geometry(const Geometry& geometry);

// Contour preparation -------------------------------------------------------

struct Vertex3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ContourSummary {
  std::size_t features = 0;
  double z_min = 0.0;
  double z_max = 0.0;
  std::size_t vertices = 0;
};

struct ContourSet {
  /// One vertex list per feature, consecutive duplicates removed.
  std::vector<std::vector<Vertex3>> lines;
  ContourSummary summary;
};

/// Attaches each feature's elevation to its vertices and drops consecutive
/// duplicates. Accepts contour and spot-height layers.
ContourSet validate_contours(const VectorLayer& layer,
                             const LoadOptions& options = {});

/// Flattens one or more contour sets into a single vertex list in input order.
std::vector<Vertex3> collect_vertices(const std::vector<const ContourSet*>& sets);

}  // namespace terrakit
