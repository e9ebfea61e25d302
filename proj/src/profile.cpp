#include "terrakit/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "terrakit/error.hpp"
#include "terrakit/geometry.hpp"

namespace terrakit {

std::optional<double> bilinear(const Raster& dem, double x, double y) {
  const auto& s = dem.spec;
  // Continuous cell coordinates with integers at cell centers.
  const double fc = (x - s.xll) / s.cellsize - 0.5;
  const double fr = (s.y_max() - y) / s.cellsize - 0.5;
  const double last_c = static_cast<double>(s.ncols) - 1.0;
  const double last_r = static_cast<double>(s.nrows) - 1.0;
  if (!(fc >= 0.0 && fc <= last_c && fr >= 0.0 && fr <= last_r)) return std::nullopt;
  if (s.ncols < 2 || s.nrows < 2) return std::nullopt;

  auto c0 = static_cast<std::size_t>(fc);
  auto r0 = static_cast<std::size_t>(fr);
  if (c0 + 1 >= s.ncols) c0 = s.ncols - 2;
  if (r0 + 1 >= s.nrows) r0 = s.nrows - 2;
  const double tx = fc - static_cast<double>(c0);
  const double ty = fr - static_cast<double>(r0);

  const double z00 = dem.at(r0, c0), z01 = dem.at(r0, c0 + 1);
  const double z10 = dem.at(r0 + 1, c0), z11 = dem.at(r0 + 1, c0 + 1);
  if (dem.is_nodata(z00) || dem.is_nodata(z01) || dem.is_nodata(z10) || dem.is_nodata(z11)) {
    return std::nullopt;
  }
  const double top = z00 + (z01 - z00) * tx;
  const double bottom = z10 + (z11 - z10) * tx;
  return top + (bottom - top) * ty;
}

ProfileSeries sample_profile(const Raster& dem, const Geometry& line, double step_m,
                             std::string source_id) {
  if (line.kind != GeometryKind::polyline || line.parts.empty()) {
    throw Error(Errc::kind_mismatch, "profile geometry must be a polyline");
  }
  if (!(step_m > 0.0) || !std::isfinite(step_m)) {
    throw Error(Errc::invalid_input, "profile step must be a positive number");
  }
  const auto& path = line.path();
  std::vector<double> cumulative(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    cumulative[i] = cumulative[i - 1] + geometry::distance(path[i - 1], path[i]);
  }
  const double length = cumulative.empty() ? 0.0 : cumulative.back();
  if (!(length > 0.0)) throw Error(Errc::invalid_input, "profile line has zero length");

  auto point_at = [&](double d) {
    if (d >= length) return path.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), d);
    std::size_t seg = static_cast<std::size_t>(it - cumulative.begin()) - 1;
    while (seg + 1 < path.size() && cumulative[seg + 1] == cumulative[seg]) ++seg;
    const double seg_len = cumulative[seg + 1] - cumulative[seg];
    const double t = (d - cumulative[seg]) / seg_len;
    const GeoPoint a = path[seg], b = path[seg + 1];
    return GeoPoint{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
  };

  std::vector<double> distances;
  const double tol = 1e-9 * std::max(1.0, length);
  for (std::size_t k = 0;; ++k) {
    const double d = static_cast<double>(k) * step_m;
    if (d >= length - tol) break;
    distances.push_back(d);
  }
  distances.push_back(length);

  ProfileSeries series;
  series.step_m = step_m;
  series.source_id = std::move(source_id);
  series.samples.reserve(distances.size());
  for (double d : distances) {
    const GeoPoint p = point_at(d);
    series.samples.push_back({d, p.x, p.y, bilinear(dem, p.x, p.y)});
  }
  return series;
}

std::vector<Knickpoint> detect_knickpoints(const ProfileSeries& profile,
                                           const KnickOptions& options) {
  const double w = options.window_m;
  if (!(options.min_drop_m > 0.0)) throw Error(Errc::invalid_input, "min_drop must be positive");
  if (!(profile.step_m > 0.0) || !(w >= 2.0 * profile.step_m)) {
    throw Error(Errc::invalid_input, "window must be at least twice the profile step");
  }
  const double length = profile.length();
  if (length < 2.0 * w) {
    throw Error(Errc::invalid_input, "profile of " + std::to_string(length) +
                                         " m is shorter than twice the window");
  }

  const auto& s = profile.samples;
  const std::size_t n = s.size();
  const double eps = 1e-9 * profile.step_m;

  std::vector<Knickpoint> candidates;
  std::size_t lo = 0, hi = 0;  // upstream window [lo, i), downstream (i, hi)
  for (std::size_t i = 0; i < n; ++i) {
    const double d = s[i].distance_m;
    if (d - w < -eps || d + w > length + eps) continue;
    while (lo < i && s[lo].distance_m < d - w - eps) ++lo;
    if (hi < i + 1) hi = i + 1;
    while (hi < n && s[hi].distance_m <= d + w + eps) ++hi;
    if (lo == i || hi == i + 1) continue;

    double up = 0.0, down = 0.0;
    bool valid = s[i].elevation_m.has_value();
    for (std::size_t j = lo; j < i && valid; ++j) {
      if (!s[j].elevation_m) valid = false;
      else up += *s[j].elevation_m;
    }
    for (std::size_t j = i + 1; j < hi && valid; ++j) {
      if (!s[j].elevation_m) valid = false;
      else down += *s[j].elevation_m;
    }
    if (!valid) continue;
    up /= static_cast<double>(i - lo);
    down /= static_cast<double>(hi - i - 1);
    const double drop = up - down;
    if (std::abs(drop) >= options.min_drop_m) {
      candidates.push_back({d, drop, up, down, w});
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const Knickpoint& a, const Knickpoint& b) {
    return std::abs(a.drop_m) > std::abs(b.drop_m);
  });
  std::vector<Knickpoint> accepted;
  for (const auto& c : candidates) {
    const bool suppressed = std::any_of(accepted.begin(), accepted.end(), [&](const Knickpoint& k) {
      return std::abs(k.distance_m - c.distance_m) <= w;
    });
    if (!suppressed) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Knickpoint& a, const Knickpoint& b) { return a.distance_m < b.distance_m; });
  return accepted;
}

CsvTable profile_csv(const ProfileSeries& profile) {
  CsvTable t;
  t.header = {"distance_m", "x", "y", "elevation_m"};
  for (const auto& s : profile.samples) {
    t.rows.push_back({s.distance_m, s.x, s.y, s.elevation_m ? CsvCell{*s.elevation_m} : CsvCell{}});
  }
  return t;
}

CsvTable knickpoint_csv(const std::vector<Knickpoint>& knickpoints) {
  CsvTable t;
  t.header = {"distance_m", "drop_m", "upstream_mean_m", "downstream_mean_m"};
  for (const auto& k : knickpoints) {
    t.rows.push_back({k.distance_m, k.drop_m, k.upstream_mean_m, k.downstream_mean_m});
  }
  return t;
}

ProfileSeries profile_from_csv(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty() || rows[0] != std::vector<std::string>{"distance_m", "x", "y", "elevation_m"}) {
    throw Error(Errc::parse, "profile CSV must start with distance_m,x,y,elevation_m");
  }
  auto number = [](const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw Error(Errc::parse, "profile CSV line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
  };
  ProfileSeries series;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 4) throw Error(Errc::parse, "profile CSV line " + std::to_string(i + 1) + ": expected 4 fields");
    ProfileSample s;
    s.distance_m = number(r[0], i + 1);
    s.x = number(r[1], i + 1);
    s.y = number(r[2], i + 1);
    if (!r[3].empty()) s.elevation_m = number(r[3], i + 1);
    if (!series.samples.empty() && !(s.distance_m > series.samples.back().distance_m)) {
      throw Error(Errc::parse, "profile CSV distances must increase strictly");
    }
    series.samples.push_back(s);
  }
  if (series.samples.size() >= 2) {
    series.step_m = series.samples[1].distance_m - series.samples[0].distance_m;
  }
  return series;
}

}  // namespace terrakit
