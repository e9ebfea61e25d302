#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "config.hpp"
#include "render.hpp"
#include "terrakit/error.hpp"
#include "terrakit/hydro.hpp"
#include "terrakit/morphometry.hpp"
#include "terrakit/profile.hpp"
#include "terrakit/tin.hpp"
#include "terrakit/zonal.hpp"

namespace terrakit::cli {
namespace fs = std::filesystem;

namespace {

/// Bad flag combinations or values that CLI11 cannot check itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::array<double, 4> parse_bounds(const std::string& text) {
  const auto v = parse_number_list(text, "bounds");
  if (v.size() != 4 || !(v[2] > v[0]) || !(v[3] > v[1])) {
    throw Error(Errc::parse, "bounds must be 'xmin,ymin,xmax,ymax' with xmax > xmin and ymax > ymin");
  }
  return {v[0], v[1], v[2], v[3]};
}

GeoPoint parse_point(const std::string& text, const char* what) {
  const auto v = parse_number_list(text, what);
  if (v.size() != 2) throw Error(Errc::parse, std::string(what) + " must be 'x,y'");
  return {v[0], v[1]};
}

std::string fmt(double v, int decimals = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(decimals);
  s << v;
  return s.str();
}

std::string safe_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    out += std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '_';
  }
  return out.empty() ? "unnamed" : out;
}

std::string feature_name(const Feature& f, const std::string& property, std::size_t index,
                         const char* prefix) {
  if (const auto t = f.text(property)) return *t;
  if (const auto n = f.number(property)) return fmt(*n, 0);
  return prefix + std::to_string(index + 1);
}

/// Files written by the current command, so a failing stage can remove its
/// own outputs instead of leaving a half-finished set behind.
class OutputLog {
public:
  const fs::path& record(const fs::path& p) {
    files_.push_back(p);
    return files_.back();
  }
  std::size_t mark() const { return files_.size(); }
  std::size_t size() const { return files_.size(); }
  void rollback(std::size_t mark) {
    for (std::size_t i = mark; i < files_.size(); ++i) {
      std::error_code ignored;
      fs::remove(files_[i], ignored);
    }
    files_.resize(mark);
  }

  void ascii(const Raster& r, const fs::path& p) { write_ascii_grid(r, record(p)); }
  void csv(const CsvTable& t, const fs::path& p) { write_csv_table(t, record(p)); }
  void png(const Image& img, const fs::path& p) { write_png(img, record(p)); }

private:
  std::vector<fs::path> files_;
};

template <class Fn>
void stage(OutputLog& log, Fn&& fn) {
  const auto m = log.mark();
  try {
    fn();
  } catch (...) {
    log.rollback(m);
    throw;
  }
}

std::vector<double> histogram_breaks(const Raster& r, const ZoneMask* mask, double width) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    if (r.is_nodata(r.values[k]) || (mask && mask->zone[k] != 1)) continue;
    lo = std::min(lo, r.values[k]);
    hi = std::max(hi, r.values[k]);
  }
  if (lo > hi) throw Error(Errc::degenerate, "no data cells to build a histogram from");
  const double start = std::floor(lo / width) * width;
  double end = std::floor(hi / width) * width + width;
  return uniform_breaks(start, end, width);
}

CsvTable tin_report(const DemBuild& b) {
  CsvTable t;
  t.header = {"vertices", "triangles", "flat_before", "flips", "steiner_points", "unfixable"};
  auto i = [](std::size_t v) { return CsvCell{static_cast<std::int64_t>(v)}; };
  t.rows.push_back({i(b.vertices), i(b.triangles), i(b.flat_before), i(b.flips),
                    i(b.steiner_points), i(b.unfixable)});
  return t;
}

ColorStyle parse_style(const std::string& s) {
  if (s == "ramp") return ColorStyle::ramp;
  if (s == "gray") return ColorStyle::gray;
  if (s == "categorical") return ColorStyle::categorical;
  throw UsageError("unknown style '" + s + "' (ramp, gray, categorical)");
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw Error(Errc::io, what + " '" + p.string() + "' does not exist");
}

// Pipeline -------------------------------------------------------------------------

std::string run_pipeline(const PipelineConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  const fs::path dir = cfg.output_dir;
  OutputLog log;

  DemBuild built;
  stage(log, [&] {
    built = build_dem(cfg.dem);
    log.ascii(built.dem, dir / "dem.asc");
    log.csv(tin_report(built), dir / "tin_report.csv");
  });
  const Raster& dem = built.dem;

  GradientOptions gopt;
  gopt.flat_threshold = cfg.flat_threshold;
  gopt.workers = cfg.dem.workers;
  SlopeAspect sa;
  Raster classes8, exposure, hypso, shade;
  stage(log, [&] {
    sa = slope_aspect(dem, gopt);
    classes8 = reclass_aspect_8(sa.aspect);
    exposure = reclass_exposure_4(classes8);
    HillshadeOptions hopt;
    hopt.azimuth_deg = cfg.sun_azimuth_deg;
    hopt.altitude_deg = cfg.sun_altitude_deg;
    hopt.workers = cfg.dem.workers;
    shade = hillshade(dem, hopt);
    log.ascii(sa.slope, dir / "slope.asc");
    log.ascii(sa.aspect, dir / "aspect.asc");
    log.ascii(classes8, dir / "aspect8.asc");
    log.ascii(exposure, dir / "exposure.asc");
    log.ascii(shade, dir / "hillshade.asc");
    if (!cfg.hypsometry_breaks.empty()) {
      hypso = hypsometric_classes(dem, cfg.hypsometry_breaks);
      log.ascii(hypso, dir / "hypsometry.asc");
    }
  });

  std::size_t zones = 0;
  if (cfg.enclosures) {
    stage(log, [&] {
      const auto polygons = load_vector_layer(*cfg.enclosures, LayerKind::polygons);
      const MorphometryRasters rasters{dem, sa.slope, sa.aspect};
      log.csv(zonal_csv(zonal_table(rasters, polygons, cfg.name_property)), dir / "zonal.csv");
      zones = polygons.features.size();

      auto write_hists = [&](const std::string& stem, const ZoneMask* mask) {
        const std::pair<const Raster*, double> series[] = {
            {&dem, cfg.altitude_bin_m}, {&sa.slope, cfg.slope_bin_deg}};
        const char* names[] = {"altitude", "slope"};
        for (int i = 0; i < 2; ++i) {
          const auto breaks = histogram_breaks(*series[i].first, mask, series[i].second);
          log.csv(histogram_csv(histogram(*series[i].first, breaks, mask, 1)),
                  dir / ("hist_" + std::string(names[i]) + "_" + stem + ".csv"));
        }
        // Flat cells (-1) land in the underflow row.
        const auto aspect_breaks = uniform_breaks(0.0, 360.0, cfg.aspect_bin_deg);
        log.csv(histogram_csv(histogram(sa.aspect, aspect_breaks, mask, 1)),
                dir / ("hist_aspect_" + stem + ".csv"));
      };
      for (std::size_t i = 0; i < polygons.features.size(); ++i) {
        const auto& f = polygons.features[i];
        const auto mask = rasterize_polygon(f.geometry, dem.spec, 1);
        write_hists(safe_stem(feature_name(f, cfg.name_property, i, "zone")), &mask);
      }
      write_hists("entire_area", nullptr);
    });
  }

  struct ProfileOut {
    std::string stem;
    ProfileSeries series;
    std::vector<Knickpoint> knicks;
  };
  std::vector<ProfileOut> profiles;
  std::size_t knick_total = 0;
  if (cfg.profiles) {
    stage(log, [&] {
      const auto lines = load_vector_layer(*cfg.profiles, LayerKind::polylines);
      KnickOptions kopt;
      kopt.window_m = cfg.window_m;
      kopt.min_drop_m = cfg.min_drop_m;
      const double step = cfg.profile_step_m.value_or(dem.spec.cellsize);
      for (std::size_t i = 0; i < lines.features.size(); ++i) {
        const auto& f = lines.features[i];
        ProfileOut p;
        p.stem = safe_stem(feature_name(f, cfg.name_property, i, "line"));
        p.series = sample_profile(dem, f.geometry, step, p.stem);
        p.knicks = detect_knickpoints(p.series, kopt);
        knick_total += p.knicks.size();
        log.csv(profile_csv(p.series), dir / ("profile_" + p.stem + ".csv"));
        log.csv(knickpoint_csv(p.knicks), dir / ("knickpoints_" + p.stem + ".csv"));
        profiles.push_back(std::move(p));
      }
    });
  }

  std::optional<LakeResult> lake;
  if (cfg.lake_seed) {
    stage(log, [&] {
      if (cfg.lake_pour_m) {
        lake = fill_lake(dem, *cfg.lake_seed, *cfg.lake_pour_m);
      } else {
        const auto layer = load_vector_layer(*cfg.lake_containment, LayerKind::polygons);
        if (layer.features.empty()) throw Error(Errc::invalid_input, "containment layer is empty");
        lake = find_pour_elevation(dem, *cfg.lake_seed, layer.features.front().geometry,
                                   cfg.pour_tolerance_m);
      }
      log.ascii(lake_raster(*lake), dir / "lake.asc");
      log.csv(lake_csv({*lake}), dir / "lake.csv");
    });
  }

  if (cfg.render) {
    stage(log, [&] {
      log.png(render_raster(dem, ColorStyle::ramp), dir / "dem.png");
      log.png(render_raster(sa.slope, ColorStyle::ramp), dir / "slope.png");
      log.png(render_raster(classes8, ColorStyle::categorical), dir / "aspect8.png");
      log.png(render_raster(exposure, ColorStyle::categorical), dir / "exposure.png");
      log.png(render_raster(shade, ColorStyle::gray), dir / "hillshade.png");
      if (!cfg.hypsometry_breaks.empty()) {
        log.png(render_raster(hypso, ColorStyle::categorical), dir / "hypsometry.png");
      }
      if (lake) log.png(render_raster(lake_raster(*lake), ColorStyle::categorical), dir / "lake.png");
      for (const auto& p : profiles) {
        log.png(render_profile(p.series, p.knicks), dir / ("profile_" + p.stem + ".png"));
      }
    });
  }

  std::string summary = "pipeline: dem " + std::to_string(dem.spec.ncols) + "x" +
                        std::to_string(dem.spec.nrows) + " @ " + fmt(dem.spec.cellsize, 1) + " m, " +
                        std::to_string(zones) + " zones, " + std::to_string(profiles.size()) +
                        " profiles (" + std::to_string(knick_total) + " knickpoints)";
  if (lake) {
    summary += ", lake " + fmt(lake->area_m2 / 1e4) + " ha at " + fmt(lake->pour_elevation_m) + " m";
  }
  return summary + " -> " + std::to_string(log.size()) + " files in " + dir.string();
}

}  // namespace

DemBuild build_dem(const DemBuildOptions& options) {
  LoadOptions lopt;
  lopt.elevation_property = options.elevation_property;
  const auto contours = validate_contours(load_vector_layer(options.contours, LayerKind::contours, lopt), lopt);
  std::optional<ContourSet> spots;
  if (options.spot_heights) {
    spots = validate_contours(load_vector_layer(*options.spot_heights, LayerKind::spot_heights, lopt), lopt);
  }
  std::vector<const ContourSet*> sets{&contours};
  if (spots) sets.push_back(&*spots);
  const auto verts = collect_vertices(sets);

  std::vector<TinVertex> pts;
  pts.reserve(verts.size());
  for (const auto& v : verts) pts.push_back({v.x, v.y, v.z});
  Tin tin = triangulate(pts);

  DemBuild out;
  if (options.repair) {
    RepairOptions ropt;
    ropt.flat_tolerance = options.flat_tolerance;
    auto report = remove_bridge_tunnel_edges(tin, ropt);
    out.flat_before = report.flat_before;
    out.flips = report.flips;
    out.steiner_points = report.steiner_points;
    out.unfixable = report.unfixable.size();
    tin = std::move(report.tin);
  } else {
    for (std::size_t t = 0; t < tin.triangles().size(); ++t) {
      if (is_flat(tin, t, options.flat_tolerance)) ++out.flat_before;
    }
    out.unfixable = out.flat_before;
  }
  out.vertices = tin.vertices().size();
  out.triangles = tin.triangles().size();

  GridSpec spec;
  if (options.bounds) {
    const auto& b = *options.bounds;
    spec = grid_covering(b[0], b[1], b[2], b[3], options.cellsize);
  } else {
    double x0 = pts.front().x, y0 = pts.front().y, x1 = x0, y1 = y0;
    for (const auto& p : pts) {
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    spec = grid_covering(x0, y0, x1, y1, options.cellsize);
  }
  spec.validate();
  out.dem = rasterize_tin(tin, spec, options.workers);
  return out;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  const auto kv = KeyValueConfig::load(path);
  kv.reject_unknown({"inputs.contours", "inputs.spot_heights", "inputs.enclosures", "inputs.profiles",
                     "inputs.elevation_property", "inputs.name_property", "grid.cellsize",
                     "grid.bounds", "tin.flat_tolerance", "tin.repair", "terrain.flat_threshold",
                     "terrain.hypsometry_breaks", "terrain.sun_azimuth_deg",
                     "terrain.sun_altitude_deg", "zonal.altitude_bin_m", "zonal.slope_bin_deg",
                     "zonal.aspect_bin_deg", "profile.step_m", "profile.window_m",
                     "profile.min_drop_m", "lake.seed", "lake.pour_m", "lake.containment",
                     "lake.tolerance_m", "output.directory", "output.workers", "output.render"});

  PipelineConfig cfg;
  const auto contours = kv.path("inputs.contours");
  if (!contours) throw Error(Errc::parse, "config: inputs.contours is required");
  cfg.dem.contours = *contours;
  cfg.dem.spot_heights = kv.path("inputs.spot_heights");
  cfg.dem.elevation_property = kv.text("inputs.elevation_property", "elevation");
  cfg.enclosures = kv.path("inputs.enclosures");
  cfg.profiles = kv.path("inputs.profiles");
  cfg.name_property = kv.text("inputs.name_property", "name");

  cfg.dem.cellsize = kv.number("grid.cellsize", kDefaultCellsize);
  if (!(cfg.dem.cellsize > 0)) throw Error(Errc::parse, "config: grid.cellsize must be > 0");
  const auto bounds = kv.text("grid.bounds", "auto");
  if (bounds != "auto") cfg.dem.bounds = parse_bounds(bounds);
  cfg.dem.flat_tolerance = kv.number("tin.flat_tolerance", 1e-6);
  cfg.dem.repair = kv.flag("tin.repair", true);
  const double workers = kv.number("output.workers", 0);
  if (workers < 0 || workers != std::floor(workers)) {
    throw Error(Errc::parse, "config: output.workers must be a non-negative integer");
  }
  cfg.dem.workers = static_cast<unsigned>(workers);

  cfg.flat_threshold = kv.number("terrain.flat_threshold", 1e-8);
  cfg.hypsometry_breaks = kv.numbers("terrain.hypsometry_breaks");
  cfg.sun_azimuth_deg = kv.number("terrain.sun_azimuth_deg", 315.0);
  cfg.sun_altitude_deg = kv.number("terrain.sun_altitude_deg", 45.0);

  cfg.altitude_bin_m = kv.number("zonal.altitude_bin_m", 1.0);
  cfg.slope_bin_deg = kv.number("zonal.slope_bin_deg", 1.0);
  cfg.aspect_bin_deg = kv.number("zonal.aspect_bin_deg", 45.0);
  for (double w : {cfg.altitude_bin_m, cfg.slope_bin_deg, cfg.aspect_bin_deg}) {
    if (!(w > 0)) throw Error(Errc::parse, "config: histogram bin widths must be > 0");
  }

  if (kv.has("profile.step_m")) cfg.profile_step_m = kv.number("profile.step_m", 0);
  cfg.window_m = kv.number("profile.window_m", 20.0);
  cfg.min_drop_m = kv.number("profile.min_drop_m", 0.5);

  if (const auto seed = kv.get("lake.seed")) cfg.lake_seed = parse_point(*seed, "lake.seed");
  if (const auto pour = kv.get("lake.pour_m"); pour && *pour != "auto") {
    cfg.lake_pour_m = parse_number(*pour, "lake.pour_m");
  }
  cfg.lake_containment = kv.path("lake.containment");
  cfg.pour_tolerance_m = kv.number("lake.tolerance_m", 0.01);
  if (cfg.lake_seed && !cfg.lake_pour_m && !cfg.lake_containment) {
    throw Error(Errc::parse, "config: lake.seed needs lake.pour_m or lake.containment");
  }

  cfg.output_dir = kv.path("output.directory").value_or(kv.base_dir() / "out");
  cfg.render = kv.flag("output.render", true);

  // Every input must be present before any stage runs.
  require_file(cfg.dem.contours, "contours");
  if (cfg.dem.spot_heights) require_file(*cfg.dem.spot_heights, "spot heights");
  if (cfg.enclosures) require_file(*cfg.enclosures, "enclosures");
  if (cfg.profiles) require_file(*cfg.profiles, "profiles");
  if (cfg.lake_seed && cfg.lake_containment) require_file(*cfg.lake_containment, "lake containment");
  return cfg;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"terrakit: contours to DEM, morphometry, zonal tables, profiles and lake fills"};
  app.name("terrakit");
  app.require_subcommand(1, 1);
  std::function<std::string()> action;

  unsigned workers = 0;
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "Threads for raster kernels (0 = all cores)");
  };

  // build-dem
  DemBuildOptions dem_opts;
  std::string dem_bounds;
  fs::path dem_out, dem_report;
  bool no_repair = false;
  {
    auto* sub = app.add_subcommand("build-dem", "Triangulate contours (and spot heights) and rasterize");
    sub->add_option("--contours", dem_opts.contours, "Contour LineStrings (GeoJSON)")->required();
    sub->add_option("--spots", dem_opts.spot_heights, "Spot-height Points (GeoJSON)");
    sub->add_option("--elevation-property", dem_opts.elevation_property, "Elevation property name");
    sub->add_option("--cellsize", dem_opts.cellsize, "Cell size in meters")->capture_default_str();
    sub->add_option("--bounds", dem_bounds, "xmin,ymin,xmax,ymax (default: vertex bounding box)");
    sub->add_option("--flat-tolerance", dem_opts.flat_tolerance, "Flat-triangle tolerance (m)");
    sub->add_flag("--no-repair", no_repair, "Keep flat bridge/tunnel triangles");
    sub->add_option("--report", dem_report, "TIN repair report CSV");
    sub->add_option("--out", dem_out, "Output ASCII grid")->required();
    add_workers(sub);
    sub->callback([&] {
      action = [&] {
        if (!dem_bounds.empty()) dem_opts.bounds = parse_bounds(dem_bounds);
        dem_opts.repair = !no_repair;
        dem_opts.workers = workers;
        OutputLog log;
        DemBuild b;
        stage(log, [&] {
          b = build_dem(dem_opts);
          log.ascii(b.dem, dem_out);
          if (!dem_report.empty()) log.csv(tin_report(b), dem_report);
        });
        return "build-dem: " + std::to_string(b.vertices) + " vertices, " + std::to_string(b.triangles) +
               " triangles, " + std::to_string(b.flat_before) + " flat (" + std::to_string(b.unfixable) +
               " unfixable) -> " + dem_out.string() + " " + std::to_string(b.dem.spec.ncols) + "x" +
               std::to_string(b.dem.spec.nrows) + " @ " + fmt(b.dem.spec.cellsize, 1) + " m";
      };
    });
  }

  // slope / aspect
  fs::path grad_dem, grad_out;
  double flat_threshold = 1e-8;
  for (const char* name : {"slope", "aspect"}) {
    const bool is_slope = std::string(name) == "slope";
    auto* sub = app.add_subcommand(name, is_slope ? "Slope in degrees (Horn)"
                                                  : "Aspect in degrees clockwise from north, -1 flat");
    sub->add_option("--dem", grad_dem, "Input DEM (ASCII grid)")->required();
    sub->add_option("--out", grad_out, "Output ASCII grid")->required();
    sub->add_option("--flat-threshold", flat_threshold, "Gradient magnitude treated as flat");
    add_workers(sub);
    sub->callback([&, is_slope] {
      action = [&, is_slope] {
        const auto dem = read_ascii_grid(grad_dem);
        GradientOptions g;
        g.flat_threshold = flat_threshold;
        g.workers = workers;
        const auto r = is_slope ? slope(dem, g) : aspect(dem, g);
        write_ascii_grid(r, grad_out);
        std::size_t valid = 0;
        for (double v : r.values) valid += !r.is_nodata(v);
        return std::string(is_slope ? "slope" : "aspect") + ": " + std::to_string(valid) +
               " cells -> " + grad_out.string();
      };
    });
  }

  // reclass
  fs::path rc_aspect, rc_dem, rc_out;
  std::string rc_scheme = "aspect8", rc_breaks;
  {
    auto* sub = app.add_subcommand("reclass", "Aspect sectors, exposure groups or elevation bands");
    auto* a = sub->add_option("--aspect", rc_aspect, "Aspect grid (schemes aspect8, exposure)");
    auto* d = sub->add_option("--dem", rc_dem, "DEM (scheme hypsometry)");
    a->excludes(d);
    sub->add_option("--scheme", rc_scheme, "aspect8 | exposure | hypsometry")
        ->check(CLI::IsMember({"aspect8", "exposure", "hypsometry"}));
    sub->add_option("--breaks", rc_breaks, "Ascending elevation breaks, comma separated");
    sub->add_option("--out", rc_out, "Output ASCII grid")->required();
    sub->callback([&] {
      action = [&] {
        Raster r;
        if (rc_scheme == "hypsometry") {
          if (rc_dem.empty() || rc_breaks.empty()) throw UsageError("hypsometry needs --dem and --breaks");
          r = hypsometric_classes(read_ascii_grid(rc_dem), parse_number_list(rc_breaks, "--breaks"));
        } else {
          if (rc_aspect.empty()) throw UsageError(rc_scheme + " needs --aspect");
          r = reclass_aspect_8(read_ascii_grid(rc_aspect));
          if (rc_scheme == "exposure") r = reclass_exposure_4(r);
        }
        write_ascii_grid(r, rc_out);
        std::set<double> codes;
        for (double v : r.values) if (!r.is_nodata(v)) codes.insert(v);
        return "reclass " + rc_scheme + ": " + std::to_string(codes.size()) + " classes present -> " +
               rc_out.string();
      };
    });
  }

  // zonal
  fs::path z_dem, z_slope, z_aspect, z_zones, z_out;
  std::string z_name = "name";
  {
    auto* sub = app.add_subcommand("zonal", "Per-zone morphometry table");
    sub->add_option("--dem", z_dem)->required();
    sub->add_option("--slope", z_slope)->required();
    sub->add_option("--aspect", z_aspect)->required();
    sub->add_option("--zones", z_zones, "Zone Polygons (GeoJSON)")->required();
    sub->add_option("--name-property", z_name, "Property holding the zone name");
    sub->add_option("--out", z_out, "Output CSV")->required();
    sub->callback([&] {
      action = [&] {
        const auto dem = read_ascii_grid(z_dem);
        const auto sl = read_ascii_grid(z_slope);
        const auto as = read_ascii_grid(z_aspect);
        const auto zones = load_vector_layer(z_zones, LayerKind::polygons);
        const auto rows = zonal_table(MorphometryRasters{dem, sl, as}, zones, z_name);
        write_csv_table(zonal_csv(rows), z_out);
        return "zonal: " + std::to_string(rows.size()) + " rows (" + std::to_string(zones.features.size()) +
               " zones + entire area) -> " + z_out.string();
      };
    });
  }

  // hist
  fs::path h_raster, h_zones, h_out;
  std::string h_breaks;
  double h_width = 0;
  std::size_t h_zone = 0;
  {
    auto* sub = app.add_subcommand("hist", "Histogram of a raster, optionally within one zone");
    sub->add_option("--raster", h_raster)->required();
    auto* b = sub->add_option("--breaks", h_breaks, "Ascending bin edges, comma separated");
    auto* w = sub->add_option("--width", h_width, "Uniform bin width covering the data");
    b->excludes(w);
    sub->add_option("--zones", h_zones, "Zone Polygons (GeoJSON)");
    sub->add_option("--zone-index", h_zone, "Zero-based zone feature index");
    sub->add_option("--out", h_out, "Output CSV")->required();
    sub->callback([&] {
      action = [&] {
        if (h_breaks.empty() && !(h_width > 0)) throw UsageError("hist needs --breaks or a positive --width");
        const auto r = read_ascii_grid(h_raster);
        std::optional<ZoneMask> mask;
        if (!h_zones.empty()) {
          const auto zones = load_vector_layer(h_zones, LayerKind::polygons);
          if (h_zone >= zones.features.size()) throw UsageError("--zone-index out of range");
          mask = rasterize_polygon(zones.features[h_zone].geometry, r.spec, 1);
        }
        const ZoneMask* m = mask ? &*mask : nullptr;
        const auto breaks = h_breaks.empty() ? histogram_breaks(r, m, h_width)
                                             : parse_number_list(h_breaks, "--breaks");
        const auto h = histogram(r, breaks, m, 1);
        write_csv_table(histogram_csv(h), h_out);
        return "hist: " + std::to_string(h.counts.size()) + " bins, " + std::to_string(h.total()) +
               " cells -> " + h_out.string();
      };
    });
  }

  // profile
  fs::path p_dem, p_lines, p_out;
  std::size_t p_feature = 0;
  double p_step = 0;
  {
    auto* sub = app.add_subcommand("profile", "Sample a DEM along a polyline");
    sub->add_option("--dem", p_dem)->required();
    sub->add_option("--lines", p_lines, "Profile LineStrings (GeoJSON)")->required();
    sub->add_option("--feature", p_feature, "Zero-based feature index");
    sub->add_option("--step", p_step, "Sample spacing in meters (default: cellsize)");
    sub->add_option("--out", p_out, "Output CSV")->required();
    sub->callback([&] {
      action = [&] {
        const auto dem = read_ascii_grid(p_dem);
        const auto lines = load_vector_layer(p_lines, LayerKind::polylines);
        if (p_feature >= lines.features.size()) throw UsageError("--feature out of range");
        const auto series = sample_profile(dem, lines.features[p_feature].geometry,
                                           p_step > 0 ? p_step : dem.spec.cellsize);
        write_csv_table(profile_csv(series), p_out);
        return "profile: " + std::to_string(series.samples.size()) + " samples over " +
               fmt(series.length()) + " m -> " + p_out.string();
      };
    });
  }

  // knick
  fs::path k_profile, k_out;
  KnickOptions k_opts;
  {
    auto* sub = app.add_subcommand("knick", "Detect knickpoints in a profile CSV");
    sub->add_option("--profile", k_profile)->required();
    sub->add_option("--window", k_opts.window_m, "Window length in meters")->capture_default_str();
    sub->add_option("--min-drop", k_opts.min_drop_m, "Minimum |drop| in meters")->capture_default_str();
    sub->add_option("--out", k_out, "Output CSV")->required();
    sub->callback([&] {
      action = [&] {
        const auto series = profile_from_csv(read_csv(k_profile));
        const auto k = detect_knickpoints(series, k_opts);
        write_csv_table(knickpoint_csv(k), k_out);
        return "knick: " + std::to_string(k.size()) + " knickpoints -> " + k_out.string();
      };
    });
  }

  // lake
  fs::path l_dem, l_containment, l_out, l_log;
  std::string l_seed;
  std::vector<double> l_pours;
  double l_tol = 0.01;
  {
    auto* sub = app.add_subcommand("lake", "Seeded lake fill at fixed levels or up to the pour point");
    sub->add_option("--dem", l_dem)->required();
    sub->add_option("--seed", l_seed, "x,y of the seed")->required();
    auto* p = sub->add_option("--pour", l_pours, "Water level(s) in meters; repeatable");
    auto* c = sub->add_option("--containment", l_containment, "Polygon the lake must stay inside");
    p->excludes(c);
    sub->add_option("--tolerance", l_tol, "Pour search tolerance (m)");
    sub->add_option("--out", l_out, "Lake mask ASCII grid (last level)")->required();
    sub->add_option("--log", l_log, "Scenario CSV, one row per level");
    sub->callback([&] {
      action = [&] {
        if (l_pours.empty() && l_containment.empty()) throw UsageError("lake needs --pour or --containment");
        const auto dem = read_ascii_grid(l_dem);
        const GeoPoint seed = parse_point(l_seed, "--seed");
        std::vector<LakeResult> lakes;
        if (!l_containment.empty()) {
          const auto layer = load_vector_layer(l_containment, LayerKind::polygons);
          if (layer.features.empty()) throw Error(Errc::invalid_input, "containment layer is empty");
          lakes.push_back(find_pour_elevation(dem, seed, layer.features.front().geometry, l_tol));
        } else {
          for (double z : l_pours) lakes.push_back(fill_lake(dem, seed, z));
        }
        OutputLog log;
        stage(log, [&] {
          log.ascii(lake_raster(lakes.back()), l_out);
          if (!l_log.empty()) log.csv(lake_csv(lakes), l_log);
        });
        const auto& l = lakes.back();
        return "lake: pour " + fmt(l.pour_elevation_m) + " m, " + std::to_string(l.cell_count) + " cells, " +
               fmt(l.area_m2 / 1e4) + " ha, " + fmt(l.volume_m3, 1) + " m3" +
               (l.touched_boundary ? " (reaches grid edge)" : "") + " -> " + l_out.string();
      };
    });
  }

  // render
  fs::path r_raster, r_profile, r_knicks, r_out;
  std::string r_style = "ramp";
  {
    auto* sub = app.add_subcommand("render", "Render a raster or a profile to PNG");
    auto* ra = sub->add_option("--raster", r_raster, "ASCII grid");
    auto* pr = sub->add_option("--profile", r_profile, "Profile CSV");
    ra->excludes(pr);
    sub->add_option("--style", r_style, "ramp | gray | categorical (rasters)");
    sub->add_option("--knicks", r_knicks, "Knickpoint CSV to mark on a profile");
    sub->add_option("--out", r_out, "Output PNG")->required();
    sub->callback([&] {
      action = [&] {
        if (r_raster.empty() == r_profile.empty()) throw UsageError("render needs --raster or --profile");
        if (!r_raster.empty()) {
          const auto style = parse_style(r_style);
          const auto img = render_raster(read_ascii_grid(r_raster), style);
          write_png(img, r_out);
          return "render: " + std::to_string(img.width) + "x" + std::to_string(img.height) + " " + r_style +
                 " -> " + r_out.string();
        }
        const auto series = profile_from_csv(read_csv(r_profile));
        std::vector<Knickpoint> knicks;
        if (!r_knicks.empty()) {
          const auto rows = read_csv(r_knicks);
          for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].empty()) continue;
            Knickpoint k;
            k.distance_m = parse_number(rows[i][0], "knickpoint distance");
            knicks.push_back(k);
          }
        }
        const auto img = render_profile(series, knicks);
        write_png(img, r_out);
        return "render: profile plot " + std::to_string(series.samples.size()) + " samples -> " + r_out.string();
      };
    });
  }

  // pipeline
  fs::path pl_config, pl_out;
  {
    auto* sub = app.add_subcommand("pipeline", "Run every stage from a key = value config file");
    sub->add_option("--config", pl_config)->required();
    sub->add_option("--out-dir", pl_out, "Override output.directory");
    sub->callback([&] {
      action = [&] {
        auto cfg = load_pipeline_config(pl_config);
        if (!pl_out.empty()) cfg.output_dir = pl_out;
        return run_pipeline(cfg);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    out << action() << "\n";
    return kExitOk;
  } catch (const UsageError& e) {
    err << "terrakit: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "terrakit: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "terrakit: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace terrakit::cli
