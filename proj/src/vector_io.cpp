#include "terrakit/vector_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "terrakit/geometry.hpp"
#include "terrakit/io_util.hpp"

namespace terrakit {

using json = nlohmann::json;

namespace {

constexpr const char* kCrsNote =
    "coordinates are planar meters (easting, northing) in a single projected system; "
    "not longitude/latitude";

const char* geojson_type(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::point: return "Point";
    case GeometryKind::polyline: return "LineString";
    case GeometryKind::polygon: return "Polygon";
  }
  return "?";
}

struct FeatureError {
  Errc code;
  std::string message;
};

GeoPoint parse_position(const json& pos) {
  if (!pos.is_array() || pos.size() < 2 || pos.size() > 3 || !pos[0].is_number() ||
      !pos[1].is_number()) {
    throw FeatureError{Errc::parse, "position must be an array of 2 or 3 numbers"};
  }
  GeoPoint p{pos[0].get<double>(), pos[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw FeatureError{Errc::invalid_input, "non-finite coordinate"};
  }
  return p;
}

std::vector<GeoPoint> parse_positions(const json& arr) {
  if (!arr.is_array()) throw FeatureError{Errc::parse, "coordinates must be an array"};
  std::vector<GeoPoint> out;
  out.reserve(arr.size());
  for (const auto& pos : arr) out.push_back(parse_position(pos));
  return out;
}

Geometry parse_geometry(const json& g) {
  if (!g.is_object()) throw FeatureError{Errc::parse, "geometry is missing or null"};
  const auto type = g.find("type");
  const auto coords = g.find("coordinates");
  if (type == g.end() || !type->is_string() || coords == g.end()) {
    throw FeatureError{Errc::parse, "geometry needs 'type' and 'coordinates'"};
  }
  const auto& t = type->get_ref<const std::string&>();
  Geometry geometry;
  if (t == "Point") {
    geometry = Geometry::point(parse_position(*coords));
  } else if (t == "LineString") {
    geometry.kind = GeometryKind::polyline;
    geometry.parts.push_back(parse_positions(*coords));
  } else if (t == "Polygon") {
    if (!coords->is_array() || coords->empty()) {
      throw FeatureError{Errc::parse, "Polygon needs at least one ring"};
    }
    geometry.kind = GeometryKind::polygon;
    for (const auto& ring : *coords) geometry.parts.push_back(parse_positions(ring));
  } else {
    throw FeatureError{Errc::parse, "unsupported geometry type '" + t + "'"};
  }
  return geometry;
}

std::size_t distinct_count(const std::vector<GeoPoint>& pts) {
  std::vector<GeoPoint> sorted = pts;
  std::sort(sorted.begin(), sorted.end(),
            [](GeoPoint a, GeoPoint b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

void check_geometry(const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::point:
      if (g.parts.size() != 1 || g.parts[0].size() != 1) {
        throw FeatureError{Errc::invalid_input, "point must hold exactly one position"};
      }
      break;
    case GeometryKind::polyline:
      if (g.parts.size() != 1 || g.parts[0].size() < 2) {
        throw FeatureError{Errc::invalid_input, "polyline needs at least 2 vertices"};
      }
      if (distinct_count(g.parts[0]) < 2) {
        throw FeatureError{Errc::invalid_input, "zero-length polyline"};
      }
      break;
    case GeometryKind::polygon:
      for (std::size_t r = 0; r < g.parts.size(); ++r) {
        const auto& ring = g.parts[r];
        const std::string which = r == 0 ? "outer ring" : "hole " + std::to_string(r);
        if (ring.size() < 4 || ring.front() != ring.back()) {
          throw FeatureError{Errc::invalid_input,
                             which + " must be explicitly closed (first vertex repeated last)"};
        }
        if (distinct_count(ring) < 3) {
          throw FeatureError{Errc::invalid_input, which + " needs at least 3 distinct vertices"};
        }
        if (geometry::ring_self_intersects(ring)) {
          throw FeatureError{Errc::invalid_input, which + " is self-intersecting"};
        }
      }
      if (geometry::polygon_area(g) <= 0.0) {
        throw FeatureError{Errc::degenerate, "polygon has zero area"};
      }
      break;
  }
}

std::map<std::string, PropertyValue> parse_properties(const json& props) {
  std::map<std::string, PropertyValue> out;
  if (props.is_null()) return out;
  if (!props.is_object()) throw FeatureError{Errc::parse, "properties must be an object"};
  for (const auto& [key, value] : props.items()) {
    if (value.is_number()) {
      out.emplace(key, value.get<double>());
    } else if (value.is_string()) {
      out.emplace(key, value.get<std::string>());
    }
    // booleans, nulls and nested values carry nothing this toolkit uses
  }
  return out;
}

bool needs_elevation(LayerKind kind) {
  return kind == LayerKind::contours || kind == LayerKind::spot_heights;
}

json position_json(GeoPoint p) { return json::array({p.x, p.y}); }

json positions_json(const std::vector<GeoPoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(position_json(p));
  return arr;
}

}  // namespace

Geometry Geometry::point(GeoPoint p) { return Geometry{GeometryKind::point, {{p}}}; }

Geometry Geometry::polyline(std::vector<GeoPoint> path) {
  return Geometry{GeometryKind::polyline, {std::move(path)}};
}

Geometry Geometry::polygon(std::vector<GeoPoint> outer_ring,
                           std::vector<std::vector<GeoPoint>> holes) {
  Geometry g{GeometryKind::polygon, {std::move(outer_ring)}};
  for (auto& h : holes) g.parts.push_back(std::move(h));
  for (auto& ring : g.parts) {
    if (!ring.empty() && ring.front() != ring.back()) ring.push_back(ring.front());
  }
  return g;
}

std::optional<double> Feature::number(const std::string& key) const {
  const auto it = properties.find(key);
  if (it == properties.end()) return std::nullopt;
  if (const double* v = std::get_if<double>(&it->second)) return *v;
  return std::nullopt;
}

std::optional<std::string> Feature::text(const std::string& key) const {
  const auto it = properties.find(key);
  if (it == properties.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  return std::nullopt;
}

const char* to_string(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::contours: return "contours";
    case LayerKind::spot_heights: return "spot_heights";
    case LayerKind::polygons: return "polygons";
    case LayerKind::polylines: return "polylines";
  }
  return "?";
}

LayerKind layer_kind_from_string(std::string_view name) {
  for (auto kind : {LayerKind::contours, LayerKind::spot_heights, LayerKind::polygons,
                    LayerKind::polylines}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(Errc::invalid_input, "unknown layer kind '" + std::string(name) + "'");
}

GeometryKind expected_geometry(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::spot_heights: return GeometryKind::point;
    case LayerKind::polygons: return GeometryKind::polygon;
    case LayerKind::contours:
    case LayerKind::polylines: return GeometryKind::polyline;
  }
  return GeometryKind::polyline;
}

void validate_geometry(const Geometry& geometry) {
  try {
    check_geometry(geometry);
  } catch (const FeatureError& e) {
    throw Error(e.code, e.message);
  }
}

LayerReport inspect_vector_layer(std::string_view geojson, LayerKind expected,
                                 const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(geojson);
  } catch (const json::parse_error& e) {
    throw Error(Errc::parse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    throw Error(Errc::parse, "document is not a GeoJSON FeatureCollection");
  }
  const auto features = doc.find("features");
  if (features == doc.end() || !features->is_array()) {
    throw Error(Errc::parse, "FeatureCollection has no 'features' array");
  }

  LayerReport report;
  report.layer.kind = expected;
  report.input_count = features->size();
  const GeometryKind want = expected_geometry(expected);

  for (std::size_t i = 0; i < features->size(); ++i) {
    const json& f = (*features)[i];
    try {
      if (!f.is_object() || f.value("type", "") != "Feature") {
        throw FeatureError{Errc::parse, "entry is not a GeoJSON Feature"};
      }
      Feature feature;
      feature.geometry = parse_geometry(f.contains("geometry") ? f["geometry"] : json());
      if (feature.geometry.kind != want) {
        throw FeatureError{Errc::kind_mismatch,
                           std::string("expected ") + geojson_type(want) + " for layer kind '" +
                               to_string(expected) + "', found " +
                               geojson_type(feature.geometry.kind)};
      }
      check_geometry(feature.geometry);
      feature.properties = parse_properties(f.contains("properties") ? f["properties"] : json());
      if (needs_elevation(expected)) {
        const auto z = feature.number(options.elevation_property);
        if (!z) {
          throw FeatureError{Errc::invalid_input,
                             "missing numeric '" + options.elevation_property + "' property"};
        }
        if (!std::isfinite(*z)) {
          throw FeatureError{Errc::invalid_input, "non-finite elevation"};
        }
      }
      report.layer.features.push_back(std::move(feature));
    } catch (const FeatureError& e) {
      report.rejected.push_back({i, e.code, e.message});
    } catch (const json::exception& e) {
      report.rejected.push_back({i, Errc::parse, e.what()});
    }
  }
  return report;
}

VectorLayer parse_vector_layer(std::string_view geojson, LayerKind expected,
                               const LoadOptions& options) {
  auto report = inspect_vector_layer(geojson, expected, options);
  if (report.rejected.empty()) return std::move(report.layer);

  Errc code = report.rejected.front().code;
  for (const auto& d : report.rejected) {
    if (d.code == Errc::kind_mismatch) code = Errc::kind_mismatch;
  }
  std::string msg = std::to_string(report.rejected.size()) + " of " +
                    std::to_string(report.input_count) + " features rejected";
  for (const auto& d : report.rejected) {
    msg += "\n  feature " + std::to_string(d.feature_index) + ": " + d.message;
  }
  throw Error(code, msg);
}

VectorLayer load_vector_layer(const std::filesystem::path& path, LayerKind expected,
                              const LoadOptions& options) {
  const auto text = read_text_file(path);
  try {
    return parse_vector_layer(text, expected, options);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string dump_vector_layer(const VectorLayer& layer) {
  json features = json::array();
  for (const auto& f : layer.features) {
    json geometry;
    geometry["type"] = geojson_type(f.geometry.kind);
    switch (f.geometry.kind) {
      case GeometryKind::point: geometry["coordinates"] = position_json(f.geometry.parts[0][0]); break;
      case GeometryKind::polyline: geometry["coordinates"] = positions_json(f.geometry.parts[0]); break;
      case GeometryKind::polygon: {
        json rings = json::array();
        for (const auto& ring : f.geometry.parts) rings.push_back(positions_json(ring));
        geometry["coordinates"] = std::move(rings);
        break;
      }
    }
    json props = json::object();
    for (const auto& [key, value] : f.properties) {
      std::visit([&](const auto& v) { props[key] = v; }, value);
    }
    features.push_back({{"type", "Feature"}, {"properties", props}, {"geometry", geometry}});
  }
  json doc = {{"type", "FeatureCollection"},
              {"crs_note", kCrsNote},
              {"layer_kind", to_string(layer.kind)},
              {"features", std::move(features)}};
  return doc.dump(1) + "\n";
}

void write_vector_layer(const VectorLayer& layer, const std::filesystem::path& path) {
  write_file_atomic(path, dump_vector_layer(layer));
}

ContourSet validate_contours(const VectorLayer& layer, const LoadOptions& options) {
  if (!needs_elevation(layer.kind)) {
    throw Error(Errc::kind_mismatch, std::string("validate_contours needs a contours or "
                                                 "spot_heights layer, got ") +
                                         to_string(layer.kind));
  }
  ContourSet set;
  set.summary.z_min = std::numeric_limits<double>::infinity();
  set.summary.z_max = -std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < layer.features.size(); ++i) {
    const auto& f = layer.features[i];
    const auto z = f.number(options.elevation_property);
    if (!z || !std::isfinite(*z)) {
      throw Error(Errc::invalid_input,
                  "feature " + std::to_string(i) + ": missing or non-finite elevation");
    }
    std::vector<Vertex3> line;
    for (const auto& part : f.geometry.parts) {
      for (const auto& p : part) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
          throw Error(Errc::invalid_input,
                      "feature " + std::to_string(i) + ": non-finite coordinate");
        }
        if (!line.empty() && line.back().x == p.x && line.back().y == p.y) continue;
        line.push_back({p.x, p.y, *z});
      }
    }
    if (layer.kind == LayerKind::contours && line.size() < 2) {
      throw Error(Errc::invalid_input,
                  "feature " + std::to_string(i) + ": contour has fewer than 2 distinct vertices");
    }
    set.summary.z_min = std::min(set.summary.z_min, *z);
    set.summary.z_max = std::max(set.summary.z_max, *z);
    set.summary.vertices += line.size();
    set.lines.push_back(std::move(line));
  }
  set.summary.features = set.lines.size();
  if (set.lines.empty()) set.summary.z_min = set.summary.z_max = 0.0;
  return set;
}

std::vector<Vertex3> collect_vertices(const std::vector<const ContourSet*>& sets) {
  std::vector<Vertex3> out;
  for (const auto* set : sets) {
    for (const auto& line : set->lines) out.insert(out.end(), line.begin(), line.end());
  }
  return out;
}

}  // namespace terrakit
