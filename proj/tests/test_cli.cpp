#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "render.hpp"
#include "support.hpp"
#include "terrakit/csv.hpp"
#include "terrakit/error.hpp"
#include "terrakit/io_util.hpp"
#include "terrakit/raster.hpp"

using namespace terrakit;
using namespace terrakit::cli;
namespace fs = std::filesystem;
using testing_support::grid;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run terrakit_run(std::vector<std::string> args) {
  args.insert(args.begin(), "terrakit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "terrakit_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::set<std::uint32_t> colors(const Image& img) {
  std::set<std::uint32_t> out;
  for (const auto& p : img.pixels) {
    out.insert((std::uint32_t{p.r} << 24) | (std::uint32_t{p.g} << 16) | (std::uint32_t{p.b} << 8) | p.a);
  }
  return out;
}

// Square contour rings around a central spot height.
void write_contours(const fs::path& dir) {
  VectorLayer contours{LayerKind::contours, {}};
  for (int k = 1; k <= 4; ++k) {
    const double h = 10.0 * k;
    Feature f;
    f.geometry = Geometry::polyline({{50 - h, 50 - h}, {50 + h, 50 - h}, {50 + h, 50 + h}, {50 - h, 50 + h}, {50 - h, 50 - h}});
    f.properties["elevation"] = 100.0 - 2.0 * k;
    contours.features.push_back(f);
  }
  write_vector_layer(contours, dir / "contours.geojson");
  VectorLayer spots{LayerKind::spot_heights, {}};
  Feature s;
  s.geometry = Geometry::point({50.5, 50.25});
  s.properties["elevation"] = 101.0;
  spots.features.push_back(s);
  write_vector_layer(spots, dir / "spots.geojson");

  VectorLayer zones{LayerKind::polygons, {}};
  for (int k : {1, 2}) {
    Feature z;
    const double h = 12.0 * k;
    z.geometry = Geometry::polygon({{50 - h, 50 - h}, {50 + h, 50 - h}, {50 + h, 50 + h}, {50 - h, 50 + h}, {50 - h, 50 - h}});
    z.properties["name"] = "zone " + std::to_string(k);
    zones.features.push_back(z);
  }
  write_vector_layer(zones, dir / "zones.geojson");

  VectorLayer lines{LayerKind::polylines, {}};
  Feature l;
  l.geometry = Geometry::polyline({{12, 50}, {88, 50}});
  l.properties["name"] = "west-east";
  lines.features.push_back(l);
  write_vector_layer(lines, dir / "lines.geojson");
}

}  // namespace

TEST_CASE("1x1 raster renders to one opaque pixel") {
  Raster r(grid(1, 1), 42.0);
  const auto img = render_raster(r, ColorStyle::ramp);
  REQUIRE(img.width == 1);
  REQUIRE(img.height == 1);
  CHECK(img.pixels[0].a == 255);

  const auto dir = scratch("one_pixel");
  write_ascii_grid(r, dir / "one.asc");
  const auto run = terrakit_run({"render", "--raster", (dir / "one.asc").string(), "--out", (dir / "one.png").string()});
  CHECK(run.code == 0);
  const auto back = decode_png(dir / "one.png");
  CHECK(back.width == 1);
  CHECK(back.height == 1);
  CHECK(back.pixels[0].a == 255);
}

TEST_CASE("categorical 8-class raster uses at most 9 colors, nodata transparent") {
  Raster r(grid(16, 16), 0.0, RasterKind::categorical);
  for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = static_cast<double>(1 + k % 8);
  for (std::size_t k = 0; k < 16; ++k) r.values[k * 17] = r.spec.nodata;
  const auto img = render_raster(r, ColorStyle::categorical);
  const auto c = colors(img);
  CHECK(c.size() <= 9);
  CHECK(c.size() == 9);
  CHECK(img.at(0, 0).a == 0);
  CHECK(c.count(0u));  // fully transparent black
}

TEST_CASE("constant DEM renders one color; nodata is transparent") {
  Raster r(grid(10, 7), 123.4);
  r.at(3, 3) = r.spec.nodata;
  for (auto style : {ColorStyle::ramp, ColorStyle::gray, ColorStyle::categorical}) {
    const auto img = render_raster(r, style);
    std::set<std::uint32_t> opaque;
    for (std::size_t y = 0; y < img.height; ++y)
      for (std::size_t x = 0; x < img.width; ++x) {
        const auto& p = img.at(x, y);
        if (x == 3 && y == 3) {
          CHECK(p.a == 0);
        } else {
          CHECK(p.a == 255);
          opaque.insert((std::uint32_t{p.r} << 16) | (std::uint32_t{p.g} << 8) | p.b);
        }
      }
    CHECK(opaque.size() == 1);
  }
}

TEST_CASE("ramp endpoints and PNG determinism") {
  Raster r(grid(3, 1), 0.0);
  r.values = {10.0, 15.0, 20.0};
  const auto img = render_raster(r, ColorStyle::ramp);
  CHECK(img.pixels[0] == Rgba{38, 115, 0, 255});
  CHECK(img.pixels[1] == Rgba{242, 224, 138, 255});
  CHECK(img.pixels[2] == Rgba{255, 255, 255, 255});
  CHECK(encode_png(img) == encode_png(img));
  const auto dir = scratch("roundtrip");
  write_png(img, dir / "r.png");
  CHECK(decode_png(dir / "r.png").pixels == img.pixels);
}

TEST_CASE("profile plot has axes, a data line and knickpoint markers") {
  ProfileSeries p;
  p.step_m = 1;
  for (int d = 0; d <= 200; ++d) p.samples.push_back({double(d), double(d), 0.0, d < 100 ? 120.0 : 119.0});
  p.samples[50].elevation_m.reset();
  Knickpoint k;
  k.distance_m = 100;
  const auto img = render_profile(p, {k});
  CHECK(img.width == 800);
  CHECK(img.height == 400);
  std::size_t black = 0, blue = 0, red = 0;
  for (const auto& px : img.pixels) {
    black += px == Rgba{0, 0, 0, 255};
    blue += px == Rgba{31, 90, 160, 255};
    red += px == Rgba{214, 39, 40, 255};
  }
  CHECK(black > 800);  // two axes plus tick labels and titles
  CHECK(blue > 700);
  CHECK(red > 100);
}

TEST_CASE("config grammar") {
  const auto cfg = KeyValueConfig::parse(
      "top = 1   # trailing comment\n"
      "\n"
      "# a full-line comment\n"
      "[grid]\n"
      "  cellsize = 2.5\n"
      "bounds = 0, 0, 10, 10\n"
      "[inputs]\n"
      "contours = rel/c.geojson\n"
      "absolute = /abs/x.geojson\n",
      "/base");
  CHECK(cfg.number("top", 0) == 1.0);
  CHECK(cfg.number("grid.cellsize", 0) == 2.5);
  CHECK(cfg.numbers("grid.bounds") == std::vector<double>{0, 0, 10, 10});
  CHECK(*cfg.path("inputs.contours") == fs::path("/base/rel/c.geojson"));
  CHECK(*cfg.path("inputs.absolute") == fs::path("/abs/x.geojson"));
  CHECK_FALSE(cfg.has("cellsize"));
  CHECK_NOTHROW(cfg.reject_unknown({"top", "grid.cellsize", "grid.bounds", "inputs.contours", "inputs.absolute"}));
  CHECK_THROWS_AS(cfg.reject_unknown({"top"}), Error);

  CHECK_THROWS_AS(KeyValueConfig::parse("a = 1\na = 2\n"), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("just words\n"), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("[open\n"), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("a =\n"), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("x = abc\n").number("x", 0), Error);
  CHECK_THROWS_AS(KeyValueConfig::parse("x = maybe\n").flag("x", true), Error);
}

TEST_CASE("exit codes: usage 2, runtime 1, success 0") {
  CHECK(terrakit_run({}).code == kExitUsage);
  CHECK(terrakit_run({"no-such-command"}).code == kExitUsage);
  CHECK(terrakit_run({"slope", "--dem", "x.asc"}).code == kExitUsage);  // --out missing
  CHECK(terrakit_run({"hist", "--raster", "x.asc", "--out", "h.csv"}).code == kExitUsage);
  CHECK(terrakit_run({"--help"}).code == kExitOk);

  const auto dir = scratch("exit_codes");
  const auto missing = terrakit_run({"slope", "--dem", (dir / "missing.asc").string(), "--out", (dir / "s.asc").string()});
  CHECK(missing.code == kExitRuntime);
  CHECK(missing.err.find("missing.asc") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "s.asc"));

  write_file_atomic(dir / "bad.asc", "ncols 2\nnrows 2\n1 2\n");
  const auto bad = terrakit_run({"aspect", "--dem", (dir / "bad.asc").string(), "--out", (dir / "a.asc").string()});
  CHECK(bad.code == kExitRuntime);
  CHECK_FALSE(fs::exists(dir / "a.asc"));
}

TEST_CASE("the installed binary reports the same exit codes") {
  const std::string bin = TERRAKIT_CLI_PATH;
  CHECK(std::system((bin + " >/dev/null 2>&1").c_str()) != 0);
  CHECK(WEXITSTATUS(std::system((bin + " bogus >/dev/null 2>&1").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((bin + " slope --dem /nonexistent.asc --out /tmp/x.asc >/dev/null 2>&1").c_str())) == 1);
}

TEST_CASE("subcommands chain from contours to tables, profiles, lakes and images") {
  const auto dir = scratch("chain");
  write_contours(dir);
  auto p = [&](const char* name) { return (dir / name).string(); };

  auto run = terrakit_run({"build-dem", "--contours", p("contours.geojson"), "--spots", p("spots.geojson"), "--cellsize",
                  "2", "--out", p("dem.asc"), "--report", p("tin.csv")});
  REQUIRE(run.code == 0);
  CHECK(run.out.find("build-dem:") == 0);
  CHECK(std::count(run.out.begin(), run.out.end(), '\n') == 1);
  const auto dem = read_ascii_grid(dir / "dem.asc");
  CHECK(dem.spec.cellsize == 2.0);
  CHECK(read_text_file(dir / "dem.asc").find("cellsize 2.0\n") != std::string::npos);
  CHECK(read_csv(dir / "tin.csv").size() == 2);

  REQUIRE(terrakit_run({"slope", "--dem", p("dem.asc"), "--out", p("slope.asc")}).code == 0);
  REQUIRE(terrakit_run({"aspect", "--dem", p("dem.asc"), "--out", p("aspect.asc"), "--workers", "3"}).code == 0);
  REQUIRE(terrakit_run({"reclass", "--aspect", p("aspect.asc"), "--out", p("a8.asc")}).code == 0);
  REQUIRE(terrakit_run({"reclass", "--aspect", p("aspect.asc"), "--scheme", "exposure", "--out", p("exp.asc")}).code == 0);
  REQUIRE(terrakit_run({"reclass", "--dem", p("dem.asc"), "--scheme", "hypsometry", "--breaks", "94,96,98,100",
               "--out", p("hyp.asc")}).code == 0);
  CHECK(terrakit_run({"reclass", "--dem", p("dem.asc"), "--scheme", "hypsometry", "--out", p("x.asc")}).code == kExitUsage);

  run = terrakit_run({"zonal", "--dem", p("dem.asc"), "--slope", p("slope.asc"), "--aspect", p("aspect.asc"), "--zones",
             p("zones.geojson"), "--out", p("table.csv")});
  REQUIRE(run.code == 0);
  const auto table = read_csv(dir / "table.csv");
  CHECK(table.size() == 1 + 2 + 1);  // header, two zones, entire area
  CHECK(table[1][0] == "zone 1");
  CHECK(table.back()[0] == "entire_area");

  REQUIRE(terrakit_run({"hist", "--raster", p("dem.asc"), "--width", "1", "--zones", p("zones.geojson"), "--zone-index",
               "1", "--out", p("hist.csv")}).code == 0);
  CHECK(read_csv(dir / "hist.csv")[0] == std::vector<std::string>{"bin_low", "bin_high", "count"});
  CHECK(terrakit_run({"hist", "--raster", p("dem.asc"), "--width", "1", "--zones", p("zones.geojson"), "--zone-index",
             "7", "--out", p("h2.csv")}).code == kExitUsage);

  REQUIRE(terrakit_run({"profile", "--dem", p("dem.asc"), "--lines", p("lines.geojson"), "--step", "2", "--out",
               p("profile.csv")}).code == 0);
  REQUIRE(terrakit_run({"knick", "--profile", p("profile.csv"), "--window", "8", "--min-drop", "0.5", "--out",
               p("knick.csv")}).code == 0);
  REQUIRE(terrakit_run({"render", "--profile", p("profile.csv"), "--knicks", p("knick.csv"), "--out", p("profile.png")})
              .code == 0);
  CHECK(decode_png(dir / "profile.png").width == 800);

  run = terrakit_run({"lake", "--dem", p("dem.asc"), "--seed", "50,50", "--pour", "98.5", "--pour", "99.5", "--out",
             p("lake.asc"), "--log", p("lake.csv")});
  REQUIRE(run.code == 0);
  CHECK(read_csv(dir / "lake.csv").size() == 3);
  // Neither a level nor a containment polygon.
  run = terrakit_run({"lake", "--dem", p("dem.asc"), "--seed", "50,50", "--out", p("l2.asc")});
  CHECK(run.code == kExitUsage);

  REQUIRE(terrakit_run({"render", "--raster", p("a8.asc"), "--style", "categorical", "--out", p("a8.png")}).code == 0);
  CHECK(colors(decode_png(dir / "a8.png")).size() <= 10);
  CHECK(terrakit_run({"render", "--raster", p("a8.asc"), "--style", "neon", "--out", p("n.png")}).code == kExitUsage);
}

TEST_CASE("pipeline: deterministic, and a failing stage leaves none of its files") {
  const auto dir = scratch("pipeline");
  write_contours(dir);
  const std::string base =
      "[inputs]\ncontours = contours.geojson\nspot_heights = spots.geojson\nenclosures = zones.geojson\n"
      "profiles = lines.geojson\n[grid]\ncellsize = 2\n[profile]\nstep_m = 2\n";
  write_file_atomic(dir / "ok.cfg", base + "window_m = 8\n[output]\ndirectory = out_ok\n");
  auto run = terrakit_run({"pipeline", "--config", (dir / "ok.cfg").string()});
  REQUIRE(run.code == 0);
  CHECK(run.out.rfind("pipeline:", 0) == 0);
  CHECK(fs::exists(dir / "out_ok" / "zonal.csv"));
  CHECK(fs::exists(dir / "out_ok" / "profile_west_east.png"));
  REQUIRE(terrakit_run({"pipeline", "--config", (dir / "ok.cfg").string(), "--out-dir", (dir / "again").string()}).code == 0);
  for (const auto& e : fs::directory_iterator(dir / "out_ok")) {
    CHECK(read_text_file(e.path()) == read_text_file(dir / "again" / e.path().filename()));
  }

  // Window longer than half the profile: the profile stage fails.
  write_file_atomic(dir / "bad.cfg", base + "window_m = 500\n[output]\ndirectory = out_bad\n");
  run = terrakit_run({"pipeline", "--config", (dir / "bad.cfg").string()});
  CHECK(run.code == kExitRuntime);
  CHECK(fs::exists(dir / "out_bad" / "zonal.csv"));  // earlier stages completed
  CHECK_FALSE(fs::exists(dir / "out_bad" / "profile_west_east.csv"));
  CHECK_FALSE(fs::exists(dir / "out_bad" / "knickpoints_west_east.csv"));

  write_file_atomic(dir / "missing.cfg", "[inputs]\ncontours = nope.geojson\n[output]\ndirectory = out_missing\n");
  run = terrakit_run({"pipeline", "--config", (dir / "missing.cfg").string()});
  CHECK(run.code == kExitRuntime);
  CHECK_FALSE(fs::exists(dir / "out_missing"));

  write_file_atomic(dir / "typo.cfg", base + "windw_m = 8\n");
  run = terrakit_run({"pipeline", "--config", (dir / "typo.cfg").string()});
  CHECK(run.code == kExitRuntime);
  CHECK(run.err.find("windw_m") != std::string::npos);
}

TEST_CASE("bundled fixture config loads") {
  const auto cfg = load_pipeline_config(fs::path(TERRAKIT_DATA_DIR) / "iarcuri" / "pipeline.cfg");
  CHECK(cfg.dem.cellsize == 10.0);
  CHECK(cfg.enclosures.has_value());
  CHECK(cfg.lake_seed.has_value());
}
