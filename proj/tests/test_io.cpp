#include <doctest.h>

#include <sstream>

#include "circleflow/errors.hpp"
#include "circleflow/io.hpp"
#include "support.hpp"

using namespace circleflow;
using namespace testing_support;

namespace {

const char* kTetraText = R"({
  "geometry": "euclidean",
  "vertices": 4,
  "edges": [
    {"a": 1, "b": 2, "weight": 0.0}, {"a": 0, "b": 2, "weight": {"deg": 90}},
    {"a": 0, "b": 1, "weight": 0.25}, {"a": 1, "b": 3, "weight": 0.0},
    {"a": 0, "b": 3, "weight": 0.0}, {"a": 2, "b": 3, "weight": 0.0}
  ],
  "faces": [
    {"v": [0, 1, 2], "e": [0, 1, 2]}, {"v": [0, 3, 1], "e": [3, 2, 4]},
    {"v": [1, 3, 2], "e": [5, 0, 3]}, {"v": [2, 3, 0], "e": [4, 1, 5]}
  ]
})";

}  // namespace

TEST_SUITE("io") {

TEST_CASE("bundled tetrahedron") {
  const auto f = fixture("tetrahedron");
  CHECK(f.mesh.vertex_count() == 4);
  CHECK(f.mesh.edge_count() == 6);
  CHECK(f.mesh.face_count() == 4);
  CHECK(euler_characteristic(f.mesh) == 2);
  CHECK(f.geometry == Geometry::euclidean);
}

TEST_CASE("defaults when radii and targets are absent") {
  const auto f = parse_mesh_text(kTetraText);
  CHECK_FALSE(f.radii_given);
  CHECK(f.metric.radii == std::vector<double>(4, 1.0));
  CHECK_FALSE(f.targets_given);
  for (double k : f.targets) CHECK(k == doctest::Approx(pi));
  CHECK(fixture("tetrahedron_spherical").metric.radii == std::vector<double>(4, pi / 8));
}

TEST_CASE("weights in degrees are converted") {
  const auto f = parse_mesh_text(kTetraText);
  CHECK(f.mesh.edge(1).weight == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(f.mesh.edge(2).weight == 0.25);
}

TEST_CASE("weight above pi/2 is rejected naming the edge") {
  try {
    parse_mesh(data_path("bad_weight"));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].find("edge 3") != std::string::npos);
  }
}

TEST_CASE("parse errors carry the line or field") {
  try {
    parse_mesh(data_path("malformed"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  std::string text = kTetraText;
  text.replace(text.find("\"a\": 1, \"b\": 3"), 6, "\"a\": \"x\"");
  try {
    parse_mesh_text(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("edges[3].a") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_mesh_text(R"({"geometry": "flat", "vertices": 1, "edges": [], "faces": []})"), ParseError);
  CHECK_THROWS_AS(parse_mesh("/nonexistent/mesh.json"), ParseError);
}

TEST_CASE("structural problems are validation errors") {
  std::string text = kTetraText;
  const std::string face = "\"v\": [0, 1, 2]";
  text.replace(text.find(face), face.size(), "\"v\": [0, 1, 9]");
  CHECK_THROWS_AS(parse_mesh_text(text), ValidationError);
  std::string radii = kTetraText;
  radii.insert(radii.rfind('}'), R"(, "radii": [1, 1, -1, 1])");
  CHECK_THROWS_AS(parse_mesh_text(radii), ValidationError);
}

TEST_CASE("mesh round trip is exact") {
  for (const char* name : {"torus7_weighted", "genus2_violating", "tetrahedron_spherical"}) {
    auto original = fixture(name);
    original.targets_given = true;  // force targets into the document as well
    const auto again = parse_mesh_text(serialize_mesh(original));
    CHECK(again.geometry == original.geometry);
    REQUIRE(again.mesh.edge_count() == original.mesh.edge_count());
    for (int e = 0; e < again.mesh.edge_count(); ++e) {
      CHECK(again.mesh.edge(e).a == original.mesh.edge(e).a);
      CHECK(again.mesh.edge(e).b == original.mesh.edge(e).b);
      CHECK(again.mesh.edge(e).weight == original.mesh.edge(e).weight);
    }
    REQUIRE(again.mesh.face_count() == original.mesh.face_count());
    for (int f = 0; f < again.mesh.face_count(); ++f) {
      CHECK(again.mesh.face(f).v == original.mesh.face(f).v);
      CHECK(again.mesh.face(f).e == original.mesh.face(f).e);
    }
    CHECK(again.radii_given == original.radii_given);
    CHECK(again.metric.radii == original.metric.radii);
    CHECK(again.targets == original.targets);
  }
}

TEST_CASE("trace round trip and replay") {
  const auto torus = fixture("torus7_weighted");
  std::mt19937_64 rng(51);
  const auto result = run_flow(torus.mesh, perturbed(torus.metric, rng, 0.3), default_flow_config());
  REQUIRE(result.report);
  std::stringstream buffer;
  buffer.precision(17);
  write_trace(buffer, result);
  const auto parsed = read_trace(buffer);
  CHECK(parsed.trace.termination == result.trace.termination);
  CHECK(parsed.trace.geometry == Geometry::euclidean);
  REQUIRE(parsed.trace.samples.size() == result.trace.samples.size());
  REQUIRE(parsed.report);
  CHECK(parsed.report->rate_c2 == result.report->rate_c2);
  CHECK(parsed.report->limit_radii == result.report->limit_radii);
  double t = -1;
  for (std::size_t i = 0; i < parsed.trace.samples.size(); ++i) {
    const auto& s = parsed.trace.samples[i];
    CHECK(s.radii == result.trace.samples[i].radii);
    CHECK(s.curvatures == result.trace.samples[i].curvatures);
    CHECK(s.t > t);
    t = s.t;
    const auto replay = curvature_state(torus.mesh, {Geometry::euclidean, s.radii}).curvatures;
    for (std::size_t v = 0; v < replay.size(); ++v) CHECK(std::abs(replay[v] - s.curvatures[v]) <= 1e-12);
  }
}

TEST_CASE("traces need a terminal record") {
  std::stringstream buffer(R"({"t": 0, "radii": [1], "K": [0], "M": 0, "m": 0, "h": 0})");
  CHECK_THROWS_AS(read_trace(buffer), ParseError);
  std::stringstream broken("{\"t\": \n");
  CHECK_THROWS_AS(read_trace(broken), ParseError);
}

}  // TEST_SUITE
