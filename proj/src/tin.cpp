#include "terrakit/tin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "terrakit/error.hpp"
#include "terrakit/predicates.hpp"

namespace terrakit {
namespace {

using idx = std::int32_t;

constexpr int next3(int i) { return i == 2 ? 0 : i + 1; }
constexpr int prev3(int i) { return i == 0 ? 2 : i - 1; }

/// Mutable triangle soup with adjacency, shared by construction and repair.
struct Mesh {
  std::vector<TinVertex> verts;
  std::vector<Triangle> tris;
  std::vector<TriangleFlag> flags;

  int orient(idx a, idx b, idx c) const {
    return predicates::orientation(verts[a], verts[b], verts[c]);
  }

  idx add(idx a, idx b, idx c, TriangleFlag flag = TriangleFlag::natural) {
    Triangle t;
    t.v = {a, b, c};
    tris.push_back(t);
    flags.push_back(flag);
    return static_cast<idx>(tris.size() - 1);
  }

  /// Index i such that the edge opposite v[i] runs a -> b in triangle t.
  int edge_of(idx t, idx a, idx b) const {
    const auto& v = tris[t].v;
    for (int i = 0; i < 3; ++i) {
      if (v[next3(i)] == a && v[prev3(i)] == b) return i;
    }
    return -1;
  }

  void relink(idx t, idx old_nb, idx new_nb) {
    if (t == kNoNeighbor) return;
    for (auto& n : tris[t].n) {
      if (n == old_nb) {
        n = new_nb;
        return;
      }
    }
  }

  /// Opposite-vertex slot in `u` for the edge it shares with `t`.
  int opposite_slot(idx u, idx t) const {
    for (int j = 0; j < 3; ++j) {
      if (tris[u].n[j] == t) return j;
    }
    return -1;
  }

  /**
   * Replaces the edge opposite t.v[i] by the other diagonal of the quad.
   * Afterwards t = (x, a, w) and u = (x, w, b) where x = t.v[i] and w is the
   * vertex of u across the old edge (a, b). Slot 0 of both holds x.
   */
  void flip(idx t, int i) {
    const idx u = tris[t].n[i];
    const int j = opposite_slot(u, t);
    const idx x = tris[t].v[i], a = tris[t].v[next3(i)], b = tris[t].v[prev3(i)];
    const idx w = tris[u].v[j];
    const idx t_a = tris[t].n[next3(i)];  // across (b, x)
    const idx t_b = tris[t].n[prev3(i)];  // across (x, a)
    // In u = (w, b, a) rotated to slot j: n[j+1] is across (a, w), n[j+2] across (w, b).
    const idx u_b = tris[u].n[next3(j)];
    const idx u_a = tris[u].n[prev3(j)];

    tris[t].v = {x, a, w};
    tris[t].n = {u_b, u, t_b};
    tris[u].v = {x, w, b};
    tris[u].n = {u_a, t_a, t};
    relink(u_b, u, t);
    relink(t_a, t, u);
  }

  /// Splits t at new vertex p into three triangles; returns their indices.
  std::array<idx, 3> split(idx t, idx p, TriangleFlag flag) {
    const auto [a, b, c] = tris[t].v;
    const auto [na, nb, nc] = tris[t].n;  // across (b,c), (c,a), (a,b)
    const idx t1 = add(p, c, a, flag);
    const idx t2 = add(p, a, b, flag);
    tris[t].v = {p, b, c};
    flags[t] = flag;
    tris[t].n = {na, t1, t2};
    tris[t1].n = {nb, t2, t};
    tris[t2].n = {nc, t, t1};
    relink(nb, t, t1);
    relink(nc, t, t2);
    return {t, t1, t2};
  }
};

// --- construction -------------------------------------------------------------

class SweepBuilder {
public:
  explicit SweepBuilder(std::vector<TinVertex> points) {
    mesh_.verts = std::move(points);
    const std::size_t n = mesh_.verts.size();
    next_.assign(n, -1);
    prev_.assign(n, -1);
    hull_tri_.assign(n, kNoNeighbor);
  }

  Mesh build() {
    const auto& v = mesh_.verts;
    std::vector<idx> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](idx a, idx b) {
      if (v[a].x != v[b].x) return v[a].x < v[b].x;
      if (v[a].y != v[b].y) return v[a].y < v[b].y;
      return a < b;
    });

    std::size_t k = 2;
    while (k < order.size() && mesh_.orient(order[0], order[1], order[k]) == 0) ++k;
    if (k == order.size()) throw Error(Errc::degenerate, "all points are collinear");

    seed_fan(std::span<const idx>(order.data(), k), order[k]);
    idx last = order[k];
    for (std::size_t i = k + 1; i < order.size(); ++i) {
      insert(order[i], last);
      last = order[i];
    }
    return std::move(mesh_);
  }

private:
  // Collinear run c[0..k) (sorted along the line) plus the first point off it.
  void seed_fan(std::span<const idx> c, idx q) {
    const bool left = mesh_.orient(c[0], c[1], q) > 0;
    std::vector<idx> fan;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      fan.push_back(left ? mesh_.add(c[i], c[i + 1], q) : mesh_.add(c[i + 1], c[i], q));
    }
    for (std::size_t i = 0; i + 1 < fan.size(); ++i) {
      // Shared edge (c[i+1], q): slot 0 / slot 1 depending on orientation.
      if (left) {
        mesh_.tris[fan[i]].n[0] = fan[i + 1];
        mesh_.tris[fan[i + 1]].n[1] = fan[i];
      } else {
        mesh_.tris[fan[i]].n[1] = fan[i + 1];
        mesh_.tris[fan[i + 1]].n[0] = fan[i];
      }
    }
    const std::size_t m = c.size();
    if (left) {
      for (std::size_t i = 0; i + 1 < m; ++i) link_hull(c[i], c[i + 1], fan[i]);
      link_hull(c[m - 1], q, fan.back());
      link_hull(q, c[0], fan.front());
    } else {
      for (std::size_t i = m - 1; i > 0; --i) link_hull(c[i], c[i - 1], fan[i - 1]);
      link_hull(c[0], q, fan.front());
      link_hull(q, c[m - 1], fan.back());
    }
  }

  void link_hull(idx a, idx b, idx tri) {
    next_[a] = b;
    prev_[b] = a;
    hull_tri_[a] = tri;
  }

  bool visible(idx a, idx b, idx p) const { return mesh_.orient(a, b, p) < 0; }

  void insert(idx p, idx last) {
    idx lo = last, hi = last;
    if (!visible(last, next_[last], p) && !visible(prev_[last], last, p)) {
      // Rare: no edge at the previous point faces p; scan the whole hull.
      idx e = next_[last];
      while (e != last && !visible(e, next_[e], p)) e = next_[e];
      if (e == last) throw Error(Errc::degenerate, "internal: inserted point sees no hull edge");
      lo = hi = e;
    }
    while (visible(hi, next_[hi], p)) hi = next_[hi];
    while (visible(prev_[lo], lo, p)) lo = prev_[lo];

    idx previous = kNoNeighbor;
    idx first = kNoNeighbor;
    for (idx a = lo; a != hi;) {
      const idx b = next_[a];
      const idx outer = hull_tri_[a];
      const idx t = mesh_.add(b, a, p);
      auto& tri = mesh_.tris[t];
      tri.n[2] = outer;
      mesh_.tris[outer].n[mesh_.edge_of(outer, a, b)] = t;
      if (previous != kNoNeighbor) {
        tri.n[0] = previous;
        mesh_.tris[previous].n[1] = t;
      } else {
        first = t;
      }
      previous = t;
      if (a != lo) next_[a] = prev_[a] = -1;
      a = b;
    }
    link_hull(lo, p, first);
    link_hull(p, hi, previous);

    // Legalize the edges facing away from p.
    std::vector<idx> stack;
    for (idx t = first;; t = mesh_.tris[t].n[1]) {
      stack.push_back(t);
      if (t == previous) break;
    }
    legalize(stack, p);
  }

  // Each entry is a triangle with p in some slot; the edge opposite p is tested.
  void legalize(std::vector<idx>& stack, idx p) {
    auto& m = mesh_;
    while (!stack.empty()) {
      const idx t = stack.back();
      stack.pop_back();
      int i = 0;
      while (m.tris[t].v[i] != p) ++i;
      const idx u = m.tris[t].n[i];
      if (u == kNoNeighbor) continue;
      const int j = m.opposite_slot(u, t);
      const idx a = m.tris[t].v[next3(i)], b = m.tris[t].v[prev3(i)];
      const idx w = m.tris[u].v[j];
      if (!should_flip(p, a, b, w)) continue;
      m.flip(t, i);
      // Hull edges owned by u may have moved to t.
      fix_hull_owner(t);
      fix_hull_owner(u);
      stack.push_back(t);
      stack.push_back(u);
    }
  }

  void fix_hull_owner(idx t) {
    const auto& tri = mesh_.tris[t];
    for (int i = 0; i < 3; ++i) {
      if (tri.n[i] != kNoNeighbor) continue;
      const idx a = tri.v[next3(i)];
      hull_tri_[a] = t;
    }
  }

  bool should_flip(idx p, idx a, idx b, idx w) const {
    const auto& v = mesh_.verts;
    // Triangle (p, a, b) is CCW; w lies across (a, b).
    const int s = predicates::in_circle(v[p], v[a], v[b], v[w]);
    if (s != 0) return s > 0;
    return std::min(p, w) < std::min(a, b);
  }

  Mesh mesh_;
  std::vector<idx> next_, prev_;
  std::vector<idx> hull_tri_;  // triangle owning hull edge (v, next_[v])
};

// --- nearest differing-elevation vertices ------------------------------------

class VertexGrid {
public:
  explicit VertexGrid(const std::vector<TinVertex>& verts) : verts_(verts) {
    double max_x = -std::numeric_limits<double>::infinity(), max_y = max_x;
    min_x_ = min_y_ = std::numeric_limits<double>::infinity();
    for (const auto& p : verts) {
      min_x_ = std::min(min_x_, p.x);
      min_y_ = std::min(min_y_, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x_, max_y - min_y_, 1e-9});
    const std::size_t per_side =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(verts.size() / 2.0)));
    cell_ = span / static_cast<double>(per_side);
    cols_ = static_cast<std::size_t>((max_x - min_x_) / cell_) + 1;
    rows_ = static_cast<std::size_t>((max_y - min_y_) / cell_) + 1;
    buckets_.resize(cols_ * rows_);
    for (std::size_t i = 0; i < verts.size(); ++i) {
      buckets_[bucket(verts[i].x, verts[i].y)].push_back(static_cast<idx>(i));
    }
  }

  /// Up to `k` nearest vertices satisfying `accept`, ordered by (distance, index).
  template <class Pred>
  std::vector<std::pair<double, idx>> nearest(double x, double y, std::size_t k,
                                               Pred accept) const {
    std::vector<std::pair<double, idx>> found;
    const auto cx = static_cast<std::ptrdiff_t>(clamp_col((x - min_x_) / cell_));
    const auto cy = static_cast<std::ptrdiff_t>(clamp_row((y - min_y_) / cell_));
    const auto max_ring = static_cast<std::ptrdiff_t>(std::max(cols_, rows_));
    for (std::ptrdiff_t r = 0; r <= max_ring; ++r) {
      for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
          if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
          const std::ptrdiff_t gx = cx + dx, gy = cy + dy;
          if (gx < 0 || gy < 0 || gx >= static_cast<std::ptrdiff_t>(cols_) ||
              gy >= static_cast<std::ptrdiff_t>(rows_)) {
            continue;
          }
          for (idx i : buckets_[static_cast<std::size_t>(gy) * cols_ + static_cast<std::size_t>(gx)]) {
            if (!accept(i)) continue;
            const double d = std::hypot(verts_[i].x - x, verts_[i].y - y);
            found.emplace_back(d, i);
          }
        }
      }
      if (found.size() >= k) {
        std::sort(found.begin(), found.end());
        // Anything in ring r+1 or beyond is at least r * cell_ away.
        if (found[k - 1].first <= static_cast<double>(r) * cell_) {
          found.resize(k);
          return found;
        }
      }
    }
    std::sort(found.begin(), found.end());
    if (found.size() > k) found.resize(k);
    return found;
  }

private:
  std::size_t clamp_col(double f) const {
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(cols_ - 1)));
  }
  std::size_t clamp_row(double f) const {
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(rows_ - 1)));
  }
  std::size_t bucket(double x, double y) const {
    return clamp_row((y - min_y_) / cell_) * cols_ + clamp_col((x - min_x_) / cell_);
  }

  const std::vector<TinVertex>& verts_;
  double min_x_, min_y_, cell_;
  std::size_t cols_, rows_;
  std::vector<std::vector<idx>> buckets_;
};

double cross(const TinVertex& o, const TinVertex& a, double px, double py) {
  return (a.x - o.x) * (py - o.y) - (a.y - o.y) * (px - o.x);
}

}  // namespace

// --- Tin ------------------------------------------------------------------------

Tin::Tin(std::vector<TinVertex> vertices, std::vector<Triangle> triangles,
         std::vector<TriangleFlag> flags, std::size_t input_vertex_count)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      flags_(std::move(flags)),
      input_count_(input_vertex_count) {
  if (flags_.size() != triangles_.size()) {
    throw Error(Errc::invalid_input, "Tin: one flag per triangle required");
  }
  build_index();
}

void Tin::build_index() {
  bucket_start_.clear();
  bucket_items_.clear();
  if (triangles_.empty()) return;
  double max_x = -std::numeric_limits<double>::infinity(), max_y = max_x;
  min_x_ = min_y_ = std::numeric_limits<double>::infinity();
  for (const auto& p : vertices_) {
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double w = std::max(max_x - min_x_, 1e-12), h = std::max(max_y - min_y_, 1e-12);
  const double target = std::max<double>(1.0, static_cast<double>(triangles_.size()) / 2.0);
  bucket_size_ = std::sqrt(w * h / target);
  bucket_size_ = std::max({bucket_size_, w / 4096.0, h / 4096.0});
  bucket_cols_ = static_cast<std::size_t>(w / bucket_size_) + 1;
  bucket_rows_ = static_cast<std::size_t>(h / bucket_size_) + 1;

  auto col_of = [&](double x) {
    return std::min(bucket_cols_ - 1,
                    static_cast<std::size_t>(std::max(0.0, (x - min_x_) / bucket_size_)));
  };
  auto row_of = [&](double y) {
    return std::min(bucket_rows_ - 1,
                    static_cast<std::size_t>(std::max(0.0, (y - min_y_) / bucket_size_)));
  };

  // Counting sort: ranges first, then fill in ascending triangle order.
  std::vector<std::uint32_t> counts(bucket_cols_ * bucket_rows_ + 1, 0);
  auto for_each_bucket = [&](const Triangle& t, auto&& fn) {
    const auto& a = vertices_[t.v[0]];
    const auto& b = vertices_[t.v[1]];
    const auto& c = vertices_[t.v[2]];
    const std::size_t c0 = col_of(std::min({a.x, b.x, c.x})), c1 = col_of(std::max({a.x, b.x, c.x}));
    const std::size_t r0 = row_of(std::min({a.y, b.y, c.y})), r1 = row_of(std::max({a.y, b.y, c.y}));
    for (std::size_t r = r0; r <= r1; ++r) {
      for (std::size_t c = c0; c <= c1; ++c) fn(r * bucket_cols_ + c);
    }
  };
  for (const auto& t : triangles_) for_each_bucket(t, [&](std::size_t b) { ++counts[b + 1]; });
  std::partial_sum(counts.begin(), counts.end(), counts.begin());
  bucket_start_ = counts;
  bucket_items_.resize(counts.back());
  std::vector<std::uint32_t> cursor(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < triangles_.size(); ++i) {
    for_each_bucket(triangles_[i], [&](std::size_t b) {
      bucket_items_[cursor[b]++] = static_cast<std::uint32_t>(i);
    });
  }
}

std::optional<std::size_t> Tin::locate(double x, double y) const {
  if (triangles_.empty()) return std::nullopt;
  const double fx = (x - min_x_) / bucket_size_, fy = (y - min_y_) / bucket_size_;
  if (!(fx >= 0.0) || !(fy >= 0.0)) return std::nullopt;
  const auto c = static_cast<std::size_t>(fx), r = static_cast<std::size_t>(fy);
  if (c >= bucket_cols_ || r >= bucket_rows_) return std::nullopt;
  const std::size_t b = r * bucket_cols_ + c;
  const TinVertex q{x, y, 0.0};
  for (std::uint32_t k = bucket_start_[b]; k < bucket_start_[b + 1]; ++k) {
    const auto& t = triangles_[bucket_items_[k]];
    const auto& p0 = vertices_[t.v[0]];
    const auto& p1 = vertices_[t.v[1]];
    const auto& p2 = vertices_[t.v[2]];
    if (std::min({p0.x, p1.x, p2.x}) > x || std::max({p0.x, p1.x, p2.x}) < x ||
        std::min({p0.y, p1.y, p2.y}) > y || std::max({p0.y, p1.y, p2.y}) < y) {
      continue;
    }
    if (predicates::orientation(p0, p1, q) >= 0 && predicates::orientation(p1, p2, q) >= 0 &&
        predicates::orientation(p2, p0, q) >= 0) {
      return bucket_items_[k];
    }
  }
  return std::nullopt;
}

double Tin::facet_value(std::size_t t, double x, double y) const {
  const auto& tri = triangles_[t];
  const auto& a = vertices_[tri.v[0]];
  const auto& b = vertices_[tri.v[1]];
  const auto& c = vertices_[tri.v[2]];
  // Sub-triangle areas opposite each vertex; exactly zero when (x, y) is a vertex.
  const double wa = cross(b, c, x, y);
  const double wb = cross(c, a, x, y);
  const double wc = cross(a, b, x, y);
  const double sum = wa + wb + wc;
  return (wa / sum) * a.z + (wb / sum) * b.z + (wc / sum) * c.z;
}

std::optional<double> Tin::interpolate(double x, double y) const {
  const auto t = locate(x, y);
  if (!t) return std::nullopt;
  return facet_value(*t, x, y);
}

Tin triangulate(std::span<const TinVertex> points) {
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw Error(Errc::invalid_input, "triangulate: non-finite vertex");
    }
  }
  // Deduplicate, keeping the first occurrence in input order.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].x != points[b].x) return points[a].x < points[b].x;
    return points[a].y < points[b].y;
  });
  std::vector<bool> keep(points.size(), true);
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& p = points[order[i]];
    const auto& q = points[order[i - 1]];
    if (p.x == q.x && p.y == q.y) {
      if (p.z != q.z) {
        throw Error(Errc::invalid_input,
                    "duplicate point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                        ") with conflicting elevations " + std::to_string(q.z) + " and " +
                        std::to_string(p.z));
      }
      keep[order[i]] = false;
    }
  }
  std::vector<TinVertex> unique;
  unique.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) unique.push_back(points[i]);
  }
  if (unique.size() < 3) throw Error(Errc::degenerate, "triangulate needs at least 3 distinct points");

  const std::size_t n = unique.size();
  Mesh mesh = SweepBuilder(std::move(unique)).build();
  return Tin(std::move(mesh.verts), std::move(mesh.tris), std::move(mesh.flags), n);
}

bool is_flat(const Tin& tin, std::size_t triangle, double tolerance) {
  const auto& t = tin.triangles()[triangle];
  const auto v = tin.vertices();
  const double z0 = v[t.v[0]].z, z1 = v[t.v[1]].z, z2 = v[t.v[2]].z;
  return std::max({z0, z1, z2}) - std::min({z0, z1, z2}) <= tolerance;
}

RepairReport remove_bridge_tunnel_edges(const Tin& tin, const RepairOptions& options) {
  Mesh m;
  m.verts.assign(tin.vertices().begin(), tin.vertices().end());
  m.tris.assign(tin.triangles().begin(), tin.triangles().end());
  m.flags.assign(tin.flags().begin(), tin.flags().end());
  const double tol = options.flat_tolerance;

  auto flat = [&](idx t) {
    const auto& v = m.tris[t].v;
    const double z0 = m.verts[v[0]].z, z1 = m.verts[v[1]].z, z2 = m.verts[v[2]].z;
    return std::max({z0, z1, z2}) - std::min({z0, z1, z2}) <= tol;
  };

  RepairReport report;
  for (idx t = 0; t < static_cast<idx>(m.tris.size()); ++t) {
    if (flat(t)) ++report.flat_before;
  }

  double z_lo = std::numeric_limits<double>::infinity(), z_hi = -z_lo;
  for (const auto& p : m.verts) {
    z_lo = std::min(z_lo, p.z);
    z_hi = std::max(z_hi, p.z);
  }
  const VertexGrid grid(m.verts);  // Steiner points are never IDW sources

  std::vector<idx> unfixable;
  // New triangles are appended and are non-flat by construction, so a single
  // ascending pass sees every triangle that can need work.
  for (idx t = 0; t < static_cast<idx>(m.tris.size()); ++t) {
    if (!flat(t)) continue;
    const double level = m.verts[m.tris[t].v[0]].z;

    bool fixed = false;
    for (int i = 0; i < 3 && !fixed; ++i) {
      const idx u = m.tris[t].n[i];
      if (u == kNoNeighbor) continue;
      const int j = m.opposite_slot(u, t);
      const idx x = m.tris[t].v[i], a = m.tris[t].v[next3(i)], b = m.tris[t].v[prev3(i)];
      const idx w = m.tris[u].v[j];
      if (std::abs(m.verts[w].z - level) <= tol) continue;
      if (m.orient(x, a, w) <= 0 || m.orient(x, w, b) <= 0) continue;
      m.flip(t, i);
      m.flags[t] = m.flags[u] = TriangleFlag::repaired;
      ++report.flips;
      fixed = true;
    }
    if (fixed) continue;

    const bool any_other_level = z_lo < level - tol || z_hi > level + tol;
    if (any_other_level) {
      const auto& v = m.tris[t].v;
      const double cx = (m.verts[v[0]].x + m.verts[v[1]].x + m.verts[v[2]].x) / 3.0;
      const double cy = (m.verts[v[0]].y + m.verts[v[1]].y + m.verts[v[2]].y) / 3.0;
      const auto near = grid.nearest(cx, cy, options.idw_neighbors, [&](idx k) {
        return std::abs(m.verts[k].z - level) > tol;
      });
      if (!near.empty()) {
        double num = 0.0, den = 0.0;
        for (const auto& [d, k] : near) {
          const double wgt = 1.0 / std::pow(d, options.idw_power);
          num += wgt * m.verts[k].z;
          den += wgt;
        }
        const double z = num / den;
        if (std::abs(z - level) > tol) {
          m.verts.push_back({cx, cy, z});
          m.split(t, static_cast<idx>(m.verts.size() - 1), TriangleFlag::repaired);
          ++report.steiner_points;
          fixed = true;
        }
      }
    }
    if (!fixed) unfixable.push_back(t);
  }

  report.unfixable.assign(unfixable.begin(), unfixable.end());
  report.tin = Tin(std::move(m.verts), std::move(m.tris), std::move(m.flags),
                   tin.input_vertex_count());
  return report;
}

std::vector<std::string> audit(const Tin& tin) {
  std::vector<std::string> problems;
  const auto tris = tin.triangles();
  const auto verts = tin.vertices();
  const auto nv = static_cast<idx>(verts.size());
  const auto nt = static_cast<idx>(tris.size());
  for (idx t = 0; t < nt; ++t) {
    const auto& tri = tris[t];
    const std::string tag = "triangle " + std::to_string(t) + ": ";
    bool ok = true;
    for (idx v : tri.v) {
      if (v < 0 || v >= nv) {
        problems.push_back(tag + "vertex index out of range");
        ok = false;
      }
    }
    if (!ok) continue;
    if (predicates::orientation(verts[tri.v[0]], verts[tri.v[1]], verts[tri.v[2]]) <= 0) {
      problems.push_back(tag + "not strictly counter-clockwise");
    }
    for (int i = 0; i < 3; ++i) {
      const idx u = tri.n[i];
      if (u == kNoNeighbor) continue;
      if (u < 0 || u >= nt) {
        problems.push_back(tag + "neighbor index out of range");
        continue;
      }
      const idx a = tri.v[next3(i)], b = tri.v[prev3(i)];
      bool back = false;
      for (int j = 0; j < 3; ++j) {
        if (tris[u].n[j] == t && tris[u].v[next3(j)] == b && tris[u].v[prev3(j)] == a) back = true;
      }
      if (!back) problems.push_back(tag + "neighbor " + std::to_string(u) + " does not point back");
    }
  }
  return problems;
}

VectorLayer tin_to_layer(const Tin& tin) {
  VectorLayer layer;
  layer.kind = LayerKind::polygons;
  const auto verts = tin.vertices();
  for (std::size_t t = 0; t < tin.triangles().size(); ++t) {
    const auto& tri = tin.triangles()[t];
    std::vector<GeoPoint> ring;
    double z = 0.0;
    for (idx v : tri.v) {
      ring.push_back({verts[v].x, verts[v].y});
      z += verts[v].z;
    }
    Feature f;
    f.geometry = Geometry::polygon(std::move(ring));
    f.properties["z_mean"] = z / 3.0;
    f.properties["flag"] =
        std::string(tin.flags()[t] == TriangleFlag::natural ? "natural" : "repaired");
    f.properties["id"] = static_cast<double>(t);
    layer.features.push_back(std::move(f));
  }
  return layer;
}

}  // namespace terrakit
