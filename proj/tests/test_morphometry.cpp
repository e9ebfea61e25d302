#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "terrakit/error.hpp"
#include "terrakit/morphometry.hpp"

using namespace terrakit;
using testing_support::grid;
using testing_support::sample_grid;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

bool interior(const Raster& r, std::size_t row, std::size_t col, std::size_t margin = 1) {
  return row >= margin && col >= margin && row + margin < r.spec.nrows &&
         col + margin < r.spec.ncols;
}

Raster rotate_clockwise(const Raster& in) {
  GridSpec s = in.spec;
  std::swap(s.ncols, s.nrows);
  Raster out(s, s.nodata);
  for (std::size_t r = 0; r < s.nrows; ++r)
    for (std::size_t c = 0; c < s.ncols; ++c) out.at(r, c) = in.at(in.spec.nrows - 1 - c, r);
  return out;
}

// Outward azimuth from (cx, cy), clockwise from north.
double radial_azimuth(double x, double y, double cx, double cy) {
  double a = std::atan2(x - cx, y - cy) * kDeg;
  return a < 0 ? a + 360 : a;
}

double angle_diff(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

TEST_CASE("constant DEM: zero slope and flat aspect inside, nodata on the border") {
  const Raster dem(grid(6, 5), 12.5);
  const auto sa = slope_aspect(dem);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 6; ++c) {
      if (interior(dem, r, c)) {
        CHECK(sa.slope.at(r, c) == 0.0);
        CHECK(sa.aspect.at(r, c) == kFlatAspect);
      } else {
        CHECK(sa.slope.is_nodata(r, c));
        CHECK(sa.aspect.is_nodata(r, c));
      }
    }
  }
}

TEST_CASE("analytic planes") {
  const auto s = grid(12, 10, 2.0, 1000, 5000);
  const auto east = sample_grid(s, [](double x, double) { return x; });
  const auto north = sample_grid(s, [](double, double y) { return y; });
  const auto gentle = sample_grid(s, [](double x, double) { return 0.1 * x; });
  const auto se = slope(east), ae = aspect(east);
  const auto an = aspect(north);
  const auto sg = slope(gentle), ag = aspect(gentle);
  for (std::size_t r = 1; r + 1 < s.nrows; ++r) {
    for (std::size_t c = 1; c + 1 < s.ncols; ++c) {
      CHECK(std::abs(se.at(r, c) - 45.0) < 1e-9);
      CHECK(std::abs(ae.at(r, c) - 270.0) < 1e-9);
      CHECK(std::abs(an.at(r, c) - 180.0) < 1e-9);
      CHECK(std::abs(sg.at(r, c) - std::atan(0.1) * kDeg) < 1e-9);
      CHECK(std::abs(ag.at(r, c) - 270.0) < 1e-9);
    }
  }
}

TEST_CASE("cone: slope 45 and radial aspect") {
  const auto s = grid(81, 81, 1.0, -40.5, -40.5);
  const auto cone = sample_grid(s, [](double x, double y) { return 100 - std::hypot(x, y); });
  const auto sa = slope_aspect(cone);
  std::size_t checked = 0;
  for (std::size_t r = 0; r < s.nrows; ++r) {
    for (std::size_t c = 0; c < s.ncols; ++c) {
      const auto p = s.cell_center(r, c);
      if (!interior(cone, r, c, 5) || std::hypot(p.x, p.y) < 5.0) continue;
      CHECK(std::abs(sa.slope.at(r, c) - 45.0) < 0.5);
      CHECK(angle_diff(sa.aspect.at(r, c), radial_azimuth(p.x, p.y, 0, 0)) < 1.0);
      ++checked;
    }
  }
  CHECK(checked > 4000);
}

TEST_CASE("slope and aspect agree on flatness") {
  std::mt19937_64 rng(17);
  auto dem = testing_support::random_raster(rng, grid(40, 30), 0, 1, 0.05);
  // Flat patches and near-flat ones on either side of the threshold.
  for (std::size_t r = 5; r < 15; ++r)
    for (std::size_t c = 5; c < 15; ++c) dem.at(r, c) = 3.0 + (c > 10 ? 1e-12 * c : 0.0);
  const auto sa = slope_aspect(dem);
  for (std::size_t k = 0; k < dem.values.size(); ++k) {
    if (sa.slope.is_nodata(sa.slope.values[k])) {
      CHECK(sa.aspect.is_nodata(sa.aspect.values[k]));
      continue;
    }
    CHECK((sa.slope.values[k] == 0.0) == (sa.aspect.values[k] == kFlatAspect));
  }
  CHECK(slope(dem).values == sa.slope.values);
  CHECK(aspect(dem).values == sa.aspect.values);
}

TEST_CASE("nodata neighbours poison the kernel") {
  auto dem = sample_grid(grid(7, 7), [](double x, double y) { return x + 2 * y; });
  dem.at(3, 3) = dem.spec.nodata;
  const auto s = slope(dem);
  for (std::size_t r = 2; r <= 4; ++r)
    for (std::size_t c = 2; c <= 4; ++c) CHECK(s.is_nodata(r, c));
  CHECK_FALSE(s.is_nodata(1, 1));
  CHECK_FALSE(s.is_nodata(5, 5));
  CHECK_THROWS_AS(slope(Raster(grid(2, 5), 1.0)), Error);
  CHECK_THROWS_AS(aspect(Raster(grid(5, 2), 1.0)), Error);
}

TEST_CASE("rotation consistency: slope unchanged, aspect classes shift two steps") {
  std::mt19937_64 rng(90);
  const auto s = grid(37, 23, 2.0);
  const auto dem = sample_grid(s, [&](double x, double y) {
    return 50 + 3 * std::sin(x / 9.0) + 2 * std::cos(y / 7.0) + 0.01 * x * y;
  });
  const auto rot = rotate_clockwise(dem);
  const auto a = slope_aspect(dem), b = slope_aspect(rot);
  const auto ca = reclass_aspect_8(a.aspect), cb = reclass_aspect_8(b.aspect);
  const auto rot_slope = rotate_clockwise(a.slope);
  const auto rot_class = rotate_clockwise(ca);
  std::size_t compared = 0;
  for (std::size_t k = 0; k < rot_slope.values.size(); ++k) {
    if (rot_slope.is_nodata(rot_slope.values[k])) {
      CHECK(b.slope.is_nodata(b.slope.values[k]));
      continue;
    }
    CHECK(std::abs(rot_slope.values[k] - b.slope.values[k]) <= 1e-9);
    const int before = static_cast<int>(rot_class.values[k]);
    const int after = static_cast<int>(cb.values[k]);
    if (before == 0) {
      CHECK(after == 0);
    } else {
      CHECK(after == (before - 1 + 2) % 8 + 1);
    }
    ++compared;
  }
  CHECK(compared == (s.ncols - 2) * (s.nrows - 2));
}

TEST_CASE("worker count never changes the bits") {
  std::mt19937_64 rng(4);
  const auto dem = testing_support::random_raster(rng, grid(200, 151, 2.0), 90, 190, 0.01);
  GradientOptions one;
  one.workers = 1;
  const auto ref = slope_aspect(dem, one);
  for (unsigned w : {2u, 3u, 8u}) {
    GradientOptions o;
    o.workers = w;
    const auto got = slope_aspect(dem, o);
    CHECK(got.slope.values == ref.slope.values);
    CHECK(got.aspect.values == ref.aspect.values);
  }
}

TEST_CASE("8-sector reclassification") {
  CHECK(classify_aspect(0.0) == AspectClass::N);
  CHECK(classify_aspect(22.4999999) == AspectClass::N);
  CHECK(classify_aspect(22.5) == AspectClass::NE);
  CHECK(classify_aspect(337.5) == AspectClass::N);
  CHECK(classify_aspect(337.49999) == AspectClass::NW);
  CHECK(classify_aspect(180.0) == AspectClass::S);
  CHECK(classify_aspect(359.9999999) == AspectClass::N);
  CHECK(classify_aspect(-1.0) == AspectClass::flat);
  CHECK_THROWS_AS(classify_aspect(360.0), Error);
  CHECK_THROWS_AS(classify_aspect(-0.5), Error);

  std::array<int, 9> counts{};
  for (int i = 0; i < 360; ++i) ++counts[static_cast<int>(classify_aspect(i))];
  CHECK(counts[0] == 0);
  for (int k = 1; k <= 8; ++k) CHECK(counts[k] == 45);

  Raster a(grid(4, 1), 0.0);
  a.values = {-1.0, 90.0, a.spec.nodata, 200.0};
  const auto cls = reclass_aspect_8(a);
  CHECK(cls.kind == RasterKind::categorical);
  CHECK(cls.values[0] == 0);
  CHECK(cls.values[1] == 3);
  CHECK(cls.is_nodata(cls.values[2]));
  CHECK(cls.values[3] == 5);
  a.values[1] = 400.0;
  CHECK_THROWS_AS(reclass_aspect_8(a), Error);
}

TEST_CASE("exposure grouping") {
  CHECK(exposure_of(AspectClass::S) == ExposureClass::sunlit);
  CHECK(exposure_of(AspectClass::SW) == ExposureClass::sunlit);
  CHECK(exposure_of(AspectClass::W) == ExposureClass::semi_sunlit);
  CHECK(exposure_of(AspectClass::SE) == ExposureClass::semi_sunlit);
  CHECK(exposure_of(AspectClass::E) == ExposureClass::semi_shaded);
  CHECK(exposure_of(AspectClass::NE) == ExposureClass::semi_shaded);
  CHECK(exposure_of(AspectClass::N) == ExposureClass::shaded);
  CHECK(exposure_of(AspectClass::NW) == ExposureClass::shaded);
  CHECK(exposure_of(AspectClass::flat) == ExposureClass::flat);

  Raster cls(grid(10, 1), 0.0);
  for (int k = 0; k < 9; ++k) cls.values[k] = k;
  cls.values[9] = cls.spec.nodata;
  const auto ex = reclass_exposure_4(cls);
  for (int k = 0; k < 9; ++k) CHECK((ex.values[k] != 0) == (cls.values[k] != 0));
  CHECK(ex.is_nodata(ex.values[9]));
  cls.values[0] = 9;
  CHECK_THROWS_AS(reclass_exposure_4(cls), Error);
  cls.values[0] = 2.5;
  CHECK_THROWS_AS(reclass_exposure_4(cls), Error);
}

TEST_CASE("hypsometric classes are half-open") {
  Raster dem(grid(5, 1), 0.0);
  dem.values = {97.6, 100.0, 149.999, 150.0, dem.spec.nodata};
  const std::vector<double> breaks = {100, 150};
  const auto h = hypsometric_classes(dem, breaks);
  CHECK(h.values[0] == 0);
  CHECK(h.values[1] == 1);
  CHECK(h.values[2] == 1);
  CHECK(h.values[3] == 2);
  CHECK(h.is_nodata(h.values[4]));
  const std::vector<double> bad = {150, 100};
  CHECK_THROWS_AS(hypsometric_classes(dem, bad), Error);
  CHECK_THROWS_AS(hypsometric_classes(dem, std::vector<double>{}), Error);

  std::mt19937_64 rng(31);
  const auto r = testing_support::random_raster(rng, grid(50, 50), 90, 190, 0.1);
  const std::vector<double> b = {100, 120, 140, 160, 180};
  const auto cls = hypsometric_classes(r, b);
  std::array<int, 6> got{}, want{};
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    if (r.is_nodata(r.values[k])) continue;
    ++got[static_cast<int>(cls.values[k])];
    int i = 0;
    while (i < 5 && r.values[k] >= b[i]) ++i;
    ++want[i];
  }
  CHECK(got == want);
}

TEST_CASE("hillshade") {
  HillshadeOptions overhead;
  overhead.altitude_deg = 90.0;
  const auto flat = hillshade(Raster(grid(5, 5), 3.0), overhead);
  for (std::size_t r = 1; r < 4; ++r)
    for (std::size_t c = 1; c < 4; ++c) CHECK(flat.at(r, c) == doctest::Approx(255.0).epsilon(1e-12));

  // Default sun from the north-west: a plane rising to the south-east faces it.
  const auto s = grid(6, 6);
  const auto facing = hillshade(sample_grid(s, [](double x, double y) { return 0.5 * (x - y); }));
  const auto away = hillshade(sample_grid(s, [](double x, double y) { return -0.5 * (x - y); }));
  CHECK(facing.at(2, 2) > away.at(2, 2));

  HillshadeOptions bad;
  bad.altitude_deg = 0.0;
  CHECK_THROWS_AS(hillshade(Raster(grid(5, 5), 3.0), bad), Error);
  bad.altitude_deg = 91.0;
  CHECK_THROWS_AS(hillshade(Raster(grid(5, 5), 3.0), bad), Error);

  const auto cg = grid(101, 101, 1.0, -50.5, -50.5);
  const auto cone = hillshade(sample_grid(cg, [](double x, double y) { return 100 - std::hypot(x, y); }));
  std::array<double, 8> sum{};
  std::array<int, 8> n{};
  for (std::size_t r = 1; r + 1 < cg.nrows; ++r) {
    for (std::size_t c = 1; c + 1 < cg.ncols; ++c) {
      const auto p = cg.cell_center(r, c);
      if (std::hypot(p.x, p.y) < 3) continue;
      const int oct = static_cast<int>(std::fmod(radial_azimuth(p.x, p.y, 0, 0) + 22.5, 360.0) / 45.0);
      sum[oct] += cone.at(r, c);
      ++n[oct];
    }
  }
  int best = 0;
  for (int k = 1; k < 8; ++k)
    if (sum[k] / n[k] > sum[best] / n[best]) best = k;
  CHECK(best == 7);  // NW
}
