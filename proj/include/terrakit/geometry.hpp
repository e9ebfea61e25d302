#pragma once

#include <span>
#include <vector>

#include "terrakit/vector_io.hpp"

namespace terrakit::geometry {

double distance(GeoPoint a, GeoPoint b);

/// Sum of segment lengths of an open or closed vertex chain.
double path_length(std::span<const GeoPoint> path);

/// Shoelace area of a closed ring; positive when counter-clockwise.
double signed_ring_area(std::span<const GeoPoint> ring);

/// Outer ring area minus hole areas (absolute values).
double polygon_area(const Geometry& polygon);

/// Total boundary length of all rings.
double polygon_perimeter(const Geometry& polygon);

/// True if two closed segments share at least one point (sign-exact).
bool segments_intersect(GeoPoint p1, GeoPoint p2, GeoPoint q1, GeoPoint q2);

/// True if any two non-adjacent edges of the closed ring touch or cross.
bool ring_self_intersects(std::span<const GeoPoint> ring);

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points dropped.
std::vector<GeoPoint> convex_hull(std::span<const GeoPoint> points);

/// Largest distance between any two of the points (rotating calipers on the hull).
double diameter(std::span<const GeoPoint> points);

struct OrientedRect {
  GeoPoint center;
  double angle_rad = 0.0;  ///< direction of the `length` side
  double length = 0.0;     ///< longer side
  double width = 0.0;      ///< shorter side
  double area() const { return length * width; }
};

/// Minimum-area enclosing rectangle; one side is always collinear with a hull edge.
OrientedRect min_area_rect(std::span<const GeoPoint> points);

/// Crossing-number test against all rings. A point is inside iff an odd number
/// of edges cross the half-line to its left (edges include their lower endpoint),
/// which makes points on left and bottom edges inside and on right/top edges outside.
bool point_in_polygon(const Geometry& polygon, GeoPoint p);

}  // namespace terrakit::geometry
