#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "terrakit/vector_io.hpp"

namespace terrakit {

struct TinVertex {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline constexpr std::int32_t kNoNeighbor = -1;

/// Counter-clockwise vertex triple. `n[i]` is the triangle across the edge
/// opposite `v[i]`, i.e. the edge (v[i+1], v[i+2]), or kNoNeighbor on the hull.
struct Triangle {
  std::array<std::int32_t, 3> v{};
  std::array<std::int32_t, 3> n{kNoNeighbor, kNoNeighbor, kNoNeighbor};
};

enum class TriangleFlag : std::uint8_t { natural, repaired };

/**
 * @brief Immutable triangulated irregular network with a point-location index.
 *
 * Vertices [0, input_vertex_count()) are the deduplicated input points;
 * any vertices after them are Steiner points added by flat-triangle repair.
 * All query methods are const and safe to call from many threads.
 */
class Tin {
public:
  Tin() = default;
  Tin(std::vector<TinVertex> vertices, std::vector<Triangle> triangles,
      std::vector<TriangleFlag> flags, std::size_t input_vertex_count);

  std::span<const TinVertex> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const TriangleFlag> flags() const { return flags_; }
  std::size_t input_vertex_count() const { return input_count_; }

  /// Lowest-index triangle containing (x, y), boundary inclusive.
  std::optional<std::size_t> locate(double x, double y) const;

  /// Linear facet interpolation; nullopt outside the hull.
  std::optional<double> interpolate(double x, double y) const;

  /// z of the plane through triangle `t`, evaluated at (x, y).
  double facet_value(std::size_t t, double x, double y) const;

private:
  void build_index();

  std::vector<TinVertex> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<TriangleFlag> flags_;
  std::size_t input_count_ = 0;

  // Uniform bucket grid over the vertex bounding box; each bucket lists the
  // triangles whose bounding box overlaps it, in ascending index order.
  double min_x_ = 0, min_y_ = 0, bucket_size_ = 1;
  std::size_t bucket_cols_ = 0, bucket_rows_ = 0;
  std::vector<std::uint32_t> bucket_start_;
  std::vector<std::uint32_t> bucket_items_;
};

/// Delaunay triangulation by lexicographic sweep insertion with Lawson flips
/// and exact predicates. Cocircular ties pick the diagonal that touches the
/// lowest input index. Duplicate (x, y) with equal z keep the first copy;
/// conflicting z throws Errc::invalid_input. Fewer than three points or an
/// all-collinear set throws Errc::degenerate.
Tin triangulate(std::span<const TinVertex> points);

inline std::optional<double> interpolate(const Tin& tin, double x, double y) {
  return tin.interpolate(x, y);
}

struct RepairOptions {
  double flat_tolerance = 1e-6;   ///< meters
  std::size_t idw_neighbors = 8;
  double idw_power = 2.0;
};

struct RepairReport {
  Tin tin;
  /// Triangles (indices into `tin`) left flat because nothing could fix them.
  std::vector<std::size_t> unfixable;
  std::size_t flips = 0;
  std::size_t steiner_points = 0;
  std::size_t flat_before = 0;
};

/// True when the three vertex elevations span no more than `tolerance`.
bool is_flat(const Tin& tin, std::size_t triangle, double tolerance);

/**
 * Removes flat "bridge"/"tunnel" triangles, visiting triangles in index order.
 *
 * For each flat triangle: (1) flip the first edge (in v-order) whose opposite
 * vertex across it has a different elevation, provided both new triangles are
 * strictly counter-clockwise; (2) otherwise insert a Steiner point at the
 * centroid with z = inverse-distance-weighted mean of the nearest vertices
 * whose z differs from the flat level; (3) otherwise report it unfixable.
 * Input vertex elevations and the hull never change.
 */
RepairReport remove_bridge_tunnel_edges(const Tin& tin, const RepairOptions& options = {});

/// Structural problems (orientation, adjacency symmetry, zero area); empty if sound.
std::vector<std::string> audit(const Tin& tin);

/// Triangles as polygon features with `z_mean` and `flag` properties.
VectorLayer tin_to_layer(const Tin& tin);

}  // namespace terrakit
