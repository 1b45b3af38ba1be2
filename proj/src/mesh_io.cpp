#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "circleflow/errors.hpp"
#include "circleflow/io.hpp"

namespace circleflow {

namespace {

using nlohmann::json;

std::string line_of(std::string_view text, std::size_t byte) {
  const auto end = std::min(byte, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
  return "line " + std::to_string(line);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

int as_int(const json& value, const std::string& where) {
  if (!value.is_number_integer()) throw ParseError(where + ": expected an integer");
  return value.get<int>();
}

double as_real(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

double as_weight(const json& value, const std::string& where) {
  if (value.is_object()) {
    return as_real(field(value, "deg", where), where + ".deg") * std::numbers::pi / 180.0;
  }
  return as_real(value, where);
}

std::vector<double> as_reals(const json& value, const std::string& where) {
  if (!value.is_array()) throw ParseError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_real(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::array<int, 3> as_triple(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 3) throw ParseError(where + ": expected 3 integers");
  std::array<int, 3> out{};
  for (int n = 0; n < 3; ++n) out[n] = as_int(value[n], where + "[" + std::to_string(n) + "]");
  return out;
}

}  // namespace

PackingMetric default_metric(const WeightedTriangulation& mesh, Geometry g) {
  const double r = g == Geometry::spherical ? std::numbers::pi / 8 : 1.0;
  return {g, std::vector<double>(mesh.vertex_count(), r)};
}

MeshFile parse_mesh_text(std::string_view text, const ValidationOptions& options) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_of(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("mesh document must be a JSON object");

  const json& geometry_field = field(doc, "geometry", "mesh");
  if (!geometry_field.is_string()) throw ParseError("geometry: expected a string");
  Geometry geometry;
  try {
    geometry = geometry_from_string(geometry_field.get<std::string>());
  } catch (const DomainError& e) {
    throw ParseError(std::string("geometry: ") + e.what());
  }

  const int vertex_count = as_int(field(doc, "vertices", "mesh"), "vertices");
  if (vertex_count <= 0) throw ParseError("vertices: must be positive");

  std::vector<Edge> edges;
  const json& edge_list = field(doc, "edges", "mesh");
  if (!edge_list.is_array()) throw ParseError("edges: expected an array");
  for (std::size_t i = 0; i < edge_list.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& item = edge_list[i];
    edges.push_back({as_int(field(item, "a", where), where + ".a"),
                     as_int(field(item, "b", where), where + ".b"),
                     as_weight(field(item, "weight", where), where + ".weight")});
  }

  std::vector<Face> faces;
  const json& face_list = field(doc, "faces", "mesh");
  if (!face_list.is_array()) throw ParseError("faces: expected an array");
  for (std::size_t i = 0; i < face_list.size(); ++i) {
    const std::string where = "faces[" + std::to_string(i) + "]";
    const json& item = face_list[i];
    faces.push_back({as_triple(field(item, "v", where), where + ".v"),
                     as_triple(field(item, "e", where), where + ".e")});
  }

  std::optional<WeightedTriangulation> mesh;
  try {
    mesh.emplace(vertex_count, std::move(edges), std::move(faces));
  } catch (const std::invalid_argument& e) {
    throw ValidationError("mesh failed validation", {e.what()});
  }
  auto violations = validate(*mesh, options);
  if (!violations.empty()) throw ValidationError("mesh failed validation", std::move(violations));

  MeshFile file{std::move(*mesh), geometry, {}, false, {}, false};
  file.metric = default_metric(file.mesh, geometry);
  if (doc.contains("radii")) {
    file.metric.radii = as_reals(doc["radii"], "radii");
    file.radii_given = true;
    try {
      check_metric(file.mesh, file.metric);
    } catch (const DomainError& e) {
      throw ValidationError("radii failed validation", {std::string("radii: ") + e.what()});
    }
  }
  file.targets = default_targets(file.mesh, geometry);
  if (doc.contains("targets")) {
    file.targets = as_reals(doc["targets"], "targets");
    file.targets_given = true;
    if (static_cast<int>(file.targets.size()) != vertex_count) {
      throw ValidationError("targets failed validation", {"targets: expected one value per vertex"});
    }
  }
  return file;
}

MeshFile parse_mesh(const std::filesystem::path& path, const ValidationOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mesh_text(buffer.str(), options);
}

std::string serialize_mesh(const MeshFile& file) {
  json doc;
  doc["geometry"] = std::string(to_string(file.geometry));
  doc["vertices"] = file.mesh.vertex_count();
  doc["edges"] = json::array();
  for (const Edge& e : file.mesh.edges()) {
    doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});
  }
  doc["faces"] = json::array();
  for (const Face& f : file.mesh.faces()) {
    doc["faces"].push_back({{"v", f.v}, {"e", f.e}});
  }
  if (file.radii_given) doc["radii"] = file.metric.radii;
  if (file.targets_given) doc["targets"] = file.targets;
  return doc.dump(2);
}

}  // namespace circleflow
