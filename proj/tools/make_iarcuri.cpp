// Writes the synthetic "Iarcuri-like" site used by the end-to-end run:
// contours and spot heights traced from an analytic surface, four nested
// enclosure polygons, profile lines, a lake containment polygon and the
// pipeline config. Everything is a pure function of the constants below.
//
// The surface rises from west to east, carries three E-W interfluves split
// by two valleys, earth-wave ramparts along each enclosure boundary, and a
// higher rampart across the northern valley west of the site that acts as a
// dam (with a one-meter sediment step on its upstream side).

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <vector>

#include "terrakit/io_util.hpp"
#include "terrakit/vector_io.hpp"

namespace fs = std::filesystem;
using terrakit::Feature;
using terrakit::GeoPoint;
using terrakit::Geometry;
using terrakit::LayerKind;
using terrakit::VectorLayer;

namespace {

constexpr double kWidth = 6000.0, kHeight = 4000.0;
constexpr double kSample = 20.0;       // tracing grid spacing
constexpr double kInterval = 1.0;      // contour interval
constexpr GeoPoint kSiteCenter{3500.0, 2000.0};
constexpr double kDamX = 2300.0;

struct Ellipse {
  const char* name;
  double a, b;
};
constexpr Ellipse kEnclosures[] = {
    {"Enclosure 1", 300, 200}, {"Enclosure 2", 420, 300}, {"Enclosure 3", 600, 420}, {"Enclosure 4", 1100, 1000}};

double caran_axis(double x) { return 1250.0 + 120.0 * std::sin(x / 700.0); }
double lacului_axis(double x) { return 2750.0 + 100.0 * std::sin(x / 800.0 + 1.0); }

double ring_radius(double theta) { return 1.0 + 0.04 * std::sin(3.0 * theta); }

double gauss(double d, double sigma) { return std::exp(-(d / sigma) * (d / sigma)); }

double surface(double x, double y) {
  double z = 118.0 + 45.0 * (x / kWidth) + 10.0 * (y / kHeight);
  const double depth = 14.0 + 8.0 * (x / kWidth);
  const double in_caran = gauss(y - caran_axis(x), 180.0);
  const double in_lacului = gauss(y - lacului_axis(x), 180.0);
  z -= depth * (in_caran + in_lacului);
  // Gentle swell on the interfluves.
  z += 2.5 * std::cos((y - 2000.0) / 1500.0 * std::numbers::pi) * (1 - in_caran) * (1 - in_lacului);

  // Earth-wave ramparts along the enclosure boundaries.
  for (const auto& e : kEnclosures) {
    const double dx = x - kSiteCenter.x, dy = y - kSiteCenter.y;
    const double theta = std::atan2(dy / e.b, dx / e.a);
    const double rn = std::hypot(dx / e.a, dy / e.b) / ring_radius(theta);
    z += 1.5 * gauss((rn - 1.0) * std::sqrt(e.a * e.b), 20.0);
  }

  // Dam across the Lacului valley and the sediment step behind it.
  const double along = std::max(0.0, std::abs(y - 2750.0) - 250.0);
  z += 4.0 * gauss(x - kDamX, 15.0) * gauss(along, 30.0);
  z += 1.0 / (1.0 + std::exp(-(x - kDamX) / 10.0)) * in_lacului;
  return z;
}

double round_to(double v, double q) { return std::round(v / q) * q; }

// Marching squares over the sampling lattice; segments are chained through
// shared lattice edges into polylines (open at the border, closed otherwise).
std::vector<std::vector<GeoPoint>> trace_level(const std::vector<double>& f, std::size_t nx, std::size_t ny,
                                               double level) {
  auto val = [&](std::size_t i, std::size_t j) { return f[j * nx + i]; };
  auto above = [&](std::size_t i, std::size_t j) { return val(i, j) >= level; };
  auto point_on = [&](std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
    const double a = val(i0, j0), b = val(i1, j1);
    const double t = (level - a) / (b - a);
    const double x = (static_cast<double>(i0) + t * (static_cast<double>(i1) - static_cast<double>(i0))) * kSample;
    const double y = (static_cast<double>(j0) + t * (static_cast<double>(j1) - static_cast<double>(j0))) * kSample;
    return GeoPoint{round_to(x, 0.01), round_to(y, 0.01)};
  };
  auto hedge = [&](std::size_t i, std::size_t j) { return (j * nx + i) * 2; };
  auto vedge = [&](std::size_t i, std::size_t j) { return (j * nx + i) * 2 + 1; };

  struct Segment {
    std::size_t e[2];
  };
  std::vector<Segment> segs;
  std::map<std::size_t, GeoPoint> where;
  std::map<std::size_t, std::vector<std::size_t>> touching;

  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const bool s0 = above(i, j), s1 = above(i + 1, j), s2 = above(i + 1, j + 1), s3 = above(i, j + 1);
      std::size_t edges[4] = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
      const bool cut[4] = {s0 != s1, s1 != s2, s3 != s2, s0 != s3};
      std::vector<int> crossed;
      for (int k = 0; k < 4; ++k) {
        if (!cut[k]) continue;
        crossed.push_back(k);
        if (!where.count(edges[k])) {
          where[edges[k]] = k == 0   ? point_on(i, j, i + 1, j)
                            : k == 1 ? point_on(i + 1, j, i + 1, j + 1)
                            : k == 2 ? point_on(i, j + 1, i + 1, j + 1)
                                     : point_on(i, j, i, j + 1);
        }
      }
      std::vector<std::pair<int, int>> pairs;
      if (crossed.size() == 2) {
        pairs.push_back({crossed[0], crossed[1]});
      } else if (crossed.size() == 4) {
        const double center = 0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) + val(i, j + 1));
        if ((center >= level) == s0) {
          pairs = {{0, 1}, {2, 3}};
        } else {
          pairs = {{3, 0}, {1, 2}};
        }
      }
      for (const auto& [a, b] : pairs) {
        touching[edges[a]].push_back(segs.size());
        touching[edges[b]].push_back(segs.size());
        segs.push_back({{edges[a], edges[b]}});
      }
    }
  }

  std::vector<bool> used(segs.size(), false);
  std::vector<std::vector<GeoPoint>> lines;
  auto walk = [&](std::size_t start_seg, std::size_t start_edge) {
    std::vector<GeoPoint> line{where[start_edge]};
    std::size_t seg = start_seg, edge = start_edge;
    while (true) {
      used[seg] = true;
      edge = segs[seg].e[0] == edge ? segs[seg].e[1] : segs[seg].e[0];
      line.push_back(where[edge]);
      std::size_t next = segs.size();
      for (std::size_t s : touching[edge]) {
        if (!used[s]) next = s;
      }
      if (next == segs.size()) break;
      seg = next;
    }
    lines.push_back(std::move(line));
  };
  // Open chains start at border edges (touched by a single segment).
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    for (std::size_t e : segs[s].e) {
      if (!used[s] && touching[e].size() == 1) walk(s, e);
    }
  }
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (!used[s]) walk(s, segs[s].e[0]);
  }
  return lines;
}

// Drops vertices closer than `min_gap` to the previously kept one, keeping both ends.
std::vector<GeoPoint> thin(const std::vector<GeoPoint>& line, double min_gap) {
  std::vector<GeoPoint> out{line.front()};
  for (std::size_t k = 1; k + 1 < line.size(); ++k) {
    if (std::hypot(line[k].x - out.back().x, line[k].y - out.back().y) >= min_gap) out.push_back(line[k]);
  }
  out.push_back(line.back());
  return out;
}

Feature named(Geometry g, const std::string& name) {
  Feature f;
  f.geometry = std::move(g);
  f.properties["name"] = name;
  return f;
}

std::vector<GeoPoint> ellipse_ring(const Ellipse& e, int n) {
  std::vector<GeoPoint> ring;
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n;
    const double r = ring_radius(theta);
    ring.push_back({round_to(kSiteCenter.x + e.a * r * std::cos(theta), 0.01),
                    round_to(kSiteCenter.y + e.b * r * std::sin(theta), 0.01)});
  }
  ring.push_back(ring.front());
  return ring;
}

std::vector<GeoPoint> axis_line(double (*axis)(double), double x0, double x1, double step) {
  std::vector<GeoPoint> line;
  // Walks from x0 towards x1 (downstream when x0 is the eastern end).
  const auto n = static_cast<int>(std::lround((x1 - x0) / step));
  for (int k = 0; k <= n; ++k) {
    const double x = x0 + k * step;
    line.push_back({x, round_to(axis(x), 0.01)});
  }
  return line;
}

Geometry rectangle(double x0, double y0, double x1, double y1) {
  return Geometry::polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}});
}

constexpr const char* kConfig = R"(# Synthetic Iarcuri-like site: three interfluves, two valleys, four nested
# enclosures and a rampart damming the northern valley.

[inputs]
contours = contours.geojson
spot_heights = spot_heights.geojson
enclosures = enclosures.geojson
profiles = profiles.geojson

[grid]
cellsize = 10          # coarser than the usual 2 m to keep the fixture quick
bounds = 0,0,6000,4000

[tin]
flat_tolerance = 1e-6

[terrain]
hypsometry_breaks = 120,130,140,150,160,170

[zonal]
altitude_bin_m = 2
slope_bin_deg = 1
aspect_bin_deg = 45

[profile]
step_m = 10
window_m = 40
min_drop_m = 0.5

[lake]
seed = 2450,2671
containment = lake_containment.geojson
tolerance_m = 0.01

[output]
directory = out
workers = 0
render = true
)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic Iarcuri-like fixture"};
  fs::path out_dir = "data/iarcuri";
  app.add_option("--out-dir", out_dir, "Destination directory");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(out_dir);

  const auto nx = static_cast<std::size_t>(kWidth / kSample) + 1;
  const auto ny = static_cast<std::size_t>(kHeight / kSample) + 1;
  std::vector<double> f(nx * ny);
  double lo = 1e300, hi = -1e300;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = surface(static_cast<double>(i) * kSample, static_cast<double>(j) * kSample);
      f[j * nx + i] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }

  VectorLayer contours{LayerKind::contours, {}};
  std::size_t vertices = 0;
  for (double level = std::ceil(lo / kInterval) * kInterval; level <= hi; level += kInterval) {
    for (auto& line : trace_level(f, nx, ny, level)) {
      auto kept = thin(line, 0.5 * kSample);
      if (kept.size() < 2 || (kept.size() == 2 && kept[0] == kept[1])) continue;
      vertices += kept.size();
      Feature ft;
      ft.geometry = Geometry::polyline(std::move(kept));
      ft.properties["elevation"] = level;
      contours.features.push_back(std::move(ft));
    }
  }

  VectorLayer spots{LayerKind::spot_heights, {}};
  for (double y = 500; y < kHeight; y += 1000) {
    for (double x = 750; x < kWidth; x += 1500) {
      Feature ft;
      ft.geometry = Geometry::point({x, y});
      ft.properties["elevation"] = round_to(surface(x, y), 0.01);
      spots.features.push_back(std::move(ft));
    }
  }
  // Thalweg heights keep the valley floors from collapsing onto contour steps.
  for (double x = 112.5; x < kWidth; x += 25) {
    for (double (*axis)(double) : {caran_axis, lacului_axis}) {
      const double y = round_to(axis(x), 0.01);
      Feature ft;
      ft.geometry = Geometry::point({x, y});
      ft.properties["elevation"] = round_to(surface(x, y), 0.01);
      spots.features.push_back(std::move(ft));
    }
  }

  VectorLayer enclosures{LayerKind::polygons, {}};
  for (const auto& e : kEnclosures) enclosures.features.push_back(named(Geometry::polygon(ellipse_ring(e, 96)), e.name));

  VectorLayer profiles{LayerKind::polylines, {}};
  profiles.features.push_back(named(Geometry::polyline(axis_line(lacului_axis, 5700, 300, -50)), "lacului"));
  profiles.features.push_back(named(Geometry::polyline(axis_line(caran_axis, 300, 5700, 50)), "caran"));
  profiles.features.push_back(named(Geometry::polyline({{3500, 200}, {3500, 3800}}), "transect"));

  VectorLayer containment{LayerKind::polygons, {}};
  containment.features.push_back(named(rectangle(2280, 2500, 2800, 3000), "lacului dam basin"));

  terrakit::write_vector_layer(contours, out_dir / "contours.geojson");
  terrakit::write_vector_layer(spots, out_dir / "spot_heights.geojson");
  terrakit::write_vector_layer(enclosures, out_dir / "enclosures.geojson");
  terrakit::write_vector_layer(profiles, out_dir / "profiles.geojson");
  terrakit::write_vector_layer(containment, out_dir / "lake_containment.geojson");
  terrakit::write_file_atomic(out_dir / "pipeline.cfg", kConfig);

  std::cout << "make_iarcuri: " << contours.features.size() << " contours (" << vertices << " vertices, "
            << lo << ".." << hi << " m) -> " << out_dir.string() << "\n";
  return 0;
}
