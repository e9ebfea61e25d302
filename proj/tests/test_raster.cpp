#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "support.hpp"
#include "terrakit/error.hpp"
#include "terrakit/geometry.hpp"
#include "terrakit/raster.hpp"
#include "terrakit/tin.hpp"

using namespace terrakit;
using testing_support::grid;

namespace {

// Orientation sign in long double; independent of the library predicates.
bool inside_triangle(GeoPoint a, GeoPoint b, GeoPoint c, GeoPoint p) {
  auto side = [](GeoPoint o, GeoPoint q, GeoPoint r) {
    return static_cast<long double>(q.x - o.x) * (r.y - o.y) -
           static_cast<long double>(q.y - o.y) * (r.x - o.x);
  };
  const auto s1 = side(a, b, p), s2 = side(b, c, p), s3 = side(c, a, p);
  return (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
}

}  // namespace

TEST_CASE("cell centers follow the georeferencing convention") {
  const GridSpec s = grid(7, 5, 2.0, 100.0, 200.0);
  for (std::size_t r = 0; r < s.nrows; ++r) {
    for (std::size_t c = 0; c < s.ncols; ++c) {
      const auto p = s.cell_center(r, c);
      CHECK(p.x == 100.0 + (c + 0.5) * 2.0);
      CHECK(p.y == 200.0 + (5 - r - 0.5) * 2.0);
      const auto back = s.cell_of(p.x, p.y);
      REQUIRE(back.has_value());
      CHECK(back->row == r);
      CHECK(back->col == c);
    }
  }
  CHECK_FALSE(s.cell_of(99.999, 201).has_value());
  CHECK_FALSE(s.cell_of(101, 210.0).has_value());
  CHECK(s.cell_of(100.0, 200.0)->row == 4);  // south-west corner belongs to the grid
}

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(grid(0, 5).validate(), Error);
  CHECK_THROWS_AS(grid(5, 5, 0.0).validate(), Error);
  CHECK_THROWS_AS(grid(5, 5, -1.0).validate(), Error);
  CHECK_THROWS_AS(grid(100, 100).validate(9999), Error);
  CHECK_NOTHROW(grid(100, 100).validate(10000));
}

TEST_CASE("rasterize: plane reproduces analytic cell values") {
  std::vector<TinVertex> pts;
  for (int y = 0; y <= 10; y += 5)
    for (int x = 0; x <= 10; x += 5) pts.push_back({double(x), double(y), 0.5 * x});
  const Tin tin = triangulate(pts);
  const auto dem = rasterize_tin(tin, grid(10, 10, 1.0), 1);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 10; ++c) CHECK(dem.at(r, c) == doctest::Approx(0.5 * (c + 0.5)).epsilon(1e-15));
}

TEST_CASE("rasterize: single triangle covers exactly the centers inside it") {
  const std::vector<TinVertex> pts = {{0.9, 0.9, 1}, {2.2, 1.1, 2}, {1.4, 2.3, 3}};
  const Tin tin = triangulate(pts);
  const GridSpec s = grid(3, 3, 1.0);
  const auto dem = rasterize_tin(tin, s, 1);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const bool in = inside_triangle({0.9, 0.9}, {2.2, 1.1}, {1.4, 2.3}, s.cell_center(r, c));
      CHECK(dem.is_nodata(r, c) == !in);
    }
  }
  CHECK_FALSE(dem.is_nodata(1, 1));
}

TEST_CASE("rasterize: data cells over a 1 km^2 hull track the hull area") {
  std::mt19937_64 rng(8);
  auto pts = testing_support::random_points(rng, 400, 1000.0);
  for (auto& p : pts) p.z = p.x * 0.01;
  const Tin tin = triangulate(pts);
  std::vector<GeoPoint> g;
  for (const auto& p : pts) g.push_back({p.x, p.y});
  auto hull = geometry::convex_hull(g);
  hull.push_back(hull.front());
  const double area = std::abs(geometry::signed_ring_area(hull));
  const auto dem = rasterize_tin(tin, grid_covering(0, 0, 1000, 1000, 2.0), 0);
  const auto n = static_cast<double>(std::count_if(dem.values.begin(), dem.values.end(),
                                                   [&](double v) { return !dem.is_nodata(v); }));
  CHECK(std::abs(n - area / 4.0) / (area / 4.0) < 0.01);
}

TEST_CASE("rasterize is identical for any worker count") {
  std::mt19937_64 rng(9);
  auto pts = testing_support::random_points(rng, 300, 100.0);
  std::uniform_real_distribution<double> z(0, 10);
  for (auto& p : pts) p.z = z(rng);
  const Tin tin = triangulate(pts);
  const auto s = grid(97, 83, 1.0);
  const auto a = rasterize_tin(tin, s, 1);
  for (unsigned w : {2u, 3u, 7u}) CHECK(rasterize_tin(tin, s, w).values == a.values);
}

TEST_CASE("ASCII grid: 1x1 layout") {
  Raster r(grid(1, 1, 2.0), 0.0);
  r.values[0] = 42;
  CHECK(format_ascii_grid(r) ==
        "ncols 1\nnrows 1\nxllcorner 0.0\nyllcorner 0.0\ncellsize 2.0\nNODATA_value -9999\n42.000000\n");
}

TEST_CASE("ASCII grid: malformed inputs") {
  const std::string header = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n";
  CHECK_NOTHROW(parse_ascii_grid(header + "1 2\n3 4\n"));
  CHECK_THROWS_AS(parse_ascii_grid(header + "1 2\n3 4\n5 6\n"), Error);
  CHECK_THROWS_AS(parse_ascii_grid(header + "1 2\n"), Error);
  CHECK_THROWS_AS(parse_ascii_grid(header + "1 2 3\n3 4\n"), Error);
  CHECK_THROWS_AS(parse_ascii_grid(header + "1 x\n3 4\n"), Error);
  CHECK_THROWS_AS(parse_ascii_grid("ncols 2\nnrows 2\n1 2\n3 4\n"), Error);
  CHECK_THROWS_AS(parse_ascii_grid("ncols 2.5\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2\n3 4\n"), Error);
}

TEST_CASE("ASCII grid: keywords are case-insensitive and whitespace tolerant") {
  const auto r = parse_ascii_grid(
      "NCOLS   2\r\n  nrows\t1\nXLLCORNER 10\nyllCorner 20.5\nCellSize 2\nnodata_value -1\n 5   -1 \n");
  CHECK(r.spec.ncols == 2);
  CHECK(r.spec.xll == 10.0);
  CHECK(r.spec.yll == 20.5);
  CHECK(r.spec.nodata == -1.0);
  CHECK(r.values[0] == 5.0);
  CHECK(r.is_nodata(r.values[1]));
  const auto centered = parse_ascii_grid("ncols 1\nnrows 1\nxllcenter 1\nyllcenter 1\ncellsize 2\n7\n");
  CHECK(centered.spec.xll == 0.0);
  CHECK(centered.spec.yll == 0.0);
}

TEST_CASE("ASCII grid: random 64x64 with nodata round-trips through a file") {
  std::mt19937_64 rng(64);
  auto spec = grid(64, 64, 2.0, 512000.25, 401000.5);
  auto r = testing_support::random_raster(rng, spec, -50.0, 900.0, 0.1);
  for (auto& v : r.values) {
    if (!r.is_nodata(v)) v = quantize_for_ascii(v);
  }
  const auto path = std::filesystem::temp_directory_path() / "terrakit_rt.asc";
  write_ascii_grid(r, path);
  const auto back = read_ascii_grid(path);
  CHECK(back.spec == r.spec);
  CHECK(back.values == r.values);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".partial"));
}

TEST_CASE("summary statistics") {
  Raster c(grid(4, 4), 7.0);
  const auto s = raster_minmax_mean(c);
  CHECK(s.min == 7.0);
  CHECK(s.max == 7.0);
  CHECK(s.mean == 7.0);
  CHECK(s.count == 16);

  Raster r(grid(4, 1), 0.0);
  r.values = {1, 2, 3, r.spec.nodata};
  const auto t = raster_minmax_mean(r);
  CHECK(t.min == 1);
  CHECK(t.max == 3);
  CHECK(t.mean == 2.0);
  CHECK(t.count == 3);

  Raster empty(grid(2, 2), kDefaultNodata);
  CHECK_THROWS_AS(raster_minmax_mean(empty), Error);
}

TEST_CASE("compensated mean of a million values matches a sorted pairwise oracle") {
  std::mt19937_64 rng(1000000);
  auto r = testing_support::random_raster(rng, grid(1000, 1000), -1e3, 1e6, 0.0);
  for (std::size_t i = 0; i < r.values.size(); i += 3) r.values[i] *= 1e-6;
  const auto s = raster_minmax_mean(r);
  std::vector<long double> v(r.values.begin(), r.values.end());
  std::sort(v.begin(), v.end(), [](long double a, long double b) { return std::abs(a) < std::abs(b); });
  while (v.size() > 1) {
    std::vector<long double> next;
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] + v[i + 1]);
    if (v.size() % 2) next.push_back(v.back());
    v.swap(next);
  }
  const double oracle = static_cast<double>(v[0] / 1e6L);
  CHECK(std::abs(s.mean - oracle) < 1e-9);
}
