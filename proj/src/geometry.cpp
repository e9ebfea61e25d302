#include "terrakit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "terrakit/error.hpp"
#include "terrakit/predicates.hpp"

namespace terrakit::geometry {
namespace {

int orient(GeoPoint a, GeoPoint b, GeoPoint c) { return predicates::orientation(a, b, c); }

bool on_segment_box(GeoPoint p, GeoPoint a, GeoPoint b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

double cross(GeoPoint o, GeoPoint a, GeoPoint b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

double distance(GeoPoint a, GeoPoint b) { return std::hypot(b.x - a.x, b.y - a.y); }

double path_length(std::span<const GeoPoint> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += distance(path[i - 1], path[i]);
  return total;
}

double signed_ring_area(std::span<const GeoPoint> ring) {
  if (ring.size() < 3) return 0.0;
  // Shift to the first vertex so large eastings/northings do not swamp the sum.
  const GeoPoint o = ring.front();
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
    twice += (ring[i].x - o.x) * (ring[i + 1].y - o.y) - (ring[i + 1].x - o.x) * (ring[i].y - o.y);
  }
  return 0.5 * twice;
}

double polygon_area(const Geometry& polygon) {
  double area = 0.0;
  for (std::size_t i = 0; i < polygon.parts.size(); ++i) {
    const double a = std::abs(signed_ring_area(polygon.parts[i]));
    area += i == 0 ? a : -a;
  }
  return area;
}

double polygon_perimeter(const Geometry& polygon) {
  double total = 0.0;
  for (const auto& ring : polygon.parts) total += path_length(ring);
  return total;
}

bool segments_intersect(GeoPoint p1, GeoPoint p2, GeoPoint q1, GeoPoint q2) {
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0) {
    if (o1 != 0 || o2 != 0) return true;
  }
  if (o1 == 0 && on_segment_box(q1, p1, p2)) return true;
  if (o2 == 0 && on_segment_box(q2, p1, p2)) return true;
  if (o3 == 0 && on_segment_box(p1, q1, q2)) return true;
  if (o4 == 0 && on_segment_box(p2, q1, q2)) return true;
  return false;
}

bool ring_self_intersects(std::span<const GeoPoint> ring) {
  // ring is closed: edges are (i, i+1) for i in [0, n-1).
  const std::size_t edges = ring.size() - 1;
  if (edges < 3) return true;
  for (std::size_t i = 0; i < edges; ++i) {
    const GeoPoint a = ring[i], b = ring[i + 1];
    const double ax0 = std::min(a.x, b.x), ax1 = std::max(a.x, b.x);
    const double ay0 = std::min(a.y, b.y), ay1 = std::max(a.y, b.y);
    for (std::size_t j = i + 1; j < edges; ++j) {
      const GeoPoint c = ring[j], d = ring[j + 1];
      if (std::max(c.x, d.x) < ax0 || std::min(c.x, d.x) > ax1 || std::max(c.y, d.y) < ay0 ||
          std::min(c.y, d.y) > ay1) {
        continue;
      }
      const bool adjacent = j == i + 1 || (i == 0 && j == edges - 1);
      if (adjacent) {
        // Neighbouring edges share one vertex; they may only overlap if collinear and folding back.
        const GeoPoint shared = j == i + 1 ? b : a;
        const GeoPoint other_a = j == i + 1 ? a : b;
        const GeoPoint other_c = j == i + 1 ? d : c;
        if (orient(other_a, shared, other_c) == 0) {
          const double dot = (other_a.x - shared.x) * (other_c.x - shared.x) +
                             (other_a.y - shared.y) * (other_c.y - shared.y);
          if (dot > 0) return true;
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) return true;
    }
  }
  return false;
}

std::vector<GeoPoint> convex_hull(std::span<const GeoPoint> points) {
  std::vector<GeoPoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](GeoPoint a, GeoPoint b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<GeoPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double diameter(std::span<const GeoPoint> points) {
  const auto hull = convex_hull(points);
  const std::size_t n = hull.size();
  if (n < 2) return 0.0;
  if (n == 2) return distance(hull[0], hull[1]);

  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint a = hull[i], b = hull[(i + 1) % n];
    // Advance the antipodal pointer while it moves away from edge (a, b).
    while (std::abs(cross(a, b, hull[(j + 1) % n])) > std::abs(cross(a, b, hull[j]))) {
      j = (j + 1) % n;
    }
    best = std::max({best, distance(a, hull[j]), distance(b, hull[j])});
  }
  return best;
}

OrientedRect min_area_rect(std::span<const GeoPoint> points) {
  const auto hull = convex_hull(points);
  OrientedRect best;
  const std::size_t n = hull.size();
  if (n == 0) return best;
  if (n < 3) {
    best.center = n == 1 ? hull[0]
                         : GeoPoint{(hull[0].x + hull[1].x) / 2, (hull[0].y + hull[1].y) / 2};
    if (n == 2) {
      best.length = distance(hull[0], hull[1]);
      best.angle_rad = std::atan2(hull[1].y - hull[0].y, hull[1].x - hull[0].x);
    }
    return best;
  }

  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const GeoPoint a = hull[i], b = hull[(i + 1) % n];
    const double len = distance(a, b);
    const double ux = (b.x - a.x) / len, uy = (b.y - a.y) / len;
    double umin = 0, umax = 0, vmin = 0, vmax = 0;
    for (const auto& p : hull) {
      const double dx = p.x - a.x, dy = p.y - a.y;
      const double u = dx * ux + dy * uy;
      const double v = -dx * uy + dy * ux;
      umin = std::min(umin, u);
      umax = std::max(umax, u);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    const double w = umax - umin, h = vmax - vmin;
    if (w * h < best_area) {
      best_area = w * h;
      const double cu = (umin + umax) / 2, cv = (vmin + vmax) / 2;
      best.center = {a.x + cu * ux - cv * uy, a.y + cu * uy + cv * ux};
      if (w >= h) {
        best.length = w;
        best.width = h;
        best.angle_rad = std::atan2(uy, ux);
      } else {
        best.length = h;
        best.width = w;
        best.angle_rad = std::atan2(ux, -uy);
      }
    }
  }
  return best;
}

bool point_in_polygon(const Geometry& polygon, GeoPoint p) {
  bool inside = false;
  for (const auto& ring : polygon.parts) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      const GeoPoint a = ring[i], b = ring[i + 1];
      if ((a.y <= p.y) == (b.y <= p.y)) continue;
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x_cross <= p.x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace terrakit::geometry
