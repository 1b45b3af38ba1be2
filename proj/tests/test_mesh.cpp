#include <doctest.h>

#include <algorithm>
#include <bitset>
#include <numeric>

#include "circleflow/mesh.hpp"
#include "support.hpp"

using namespace circleflow;
using namespace testing_support;

namespace {

const std::vector<std::array<int, 3>> kTetra = {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {2, 3, 0}};

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

// Whether an edge set is a boundary over Z/2: Gaussian elimination against
// the face boundaries.
bool z2_boundary(const WeightedTriangulation& mesh, const std::vector<int>& loop_edges) {
  using Row = std::bitset<128>;
  REQUIRE(mesh.edge_count() <= 128);
  std::vector<Row> basis;  // kept in echelon form keyed by lowest set bit
  auto reduce = [&](Row r) {
    for (const Row& b : basis) {
      const int pivot = static_cast<int>(b._Find_first());
      if (r[pivot]) r ^= b;
    }
    return r;
  };
  for (const Face& f : mesh.faces()) {
    Row r;
    for (int e : f.e) r.flip(e);
    r = reduce(r);
    if (r.none()) continue;
    const int pivot = static_cast<int>(r._Find_first());
    for (Row& b : basis) {
      if (b[pivot]) b ^= r;
    }
    basis.push_back(r);
  }
  Row loop;
  for (int e : loop_edges) loop.flip(e);
  return reduce(loop).none();
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("tetrahedron boundary is valid with chi = 2") {
  const auto mesh = from_triples(4, kTetra);
  CHECK(validate(mesh).empty());
  CHECK(mesh.vertex_count() == 4);
  CHECK(mesh.edge_count() == 6);
  CHECK(mesh.face_count() == 4);
  CHECK(euler_characteristic(mesh) == 2);
  for (int v = 0; v < 4; ++v) CHECK(mesh.degree(v) == 3);
}

TEST_CASE("fixture surfaces: euler characteristic") {
  CHECK(euler_characteristic(fixture("torus7").mesh) == 0);
  CHECK(fixture("torus7").mesh.edge_count() == 21);
  CHECK(euler_characteristic(fixture("octahedron").mesh) == 2);
  const auto g2 = fixture("genus2").mesh;
  CHECK(validate(g2).empty());
  CHECK(euler_characteristic(g2) == -2);
}

TEST_CASE("degree-2 vertices are reported by name") {
  // Two triangles glued along their boundary.
  std::vector<Edge> edges{{1, 2, 0}, {2, 0, 0}, {0, 1, 0}};
  std::vector<Face> faces{{{0, 1, 2}, {0, 1, 2}}, {{0, 2, 1}, {0, 2, 1}}};
  const WeightedTriangulation mesh(3, edges, faces);
  const auto violations = validate(mesh);
  CHECK(mentions(violations, "vertex 0: degree 2"));
  CHECK(mentions(violations, "vertex 2: degree 2"));
}

TEST_CASE("edge on a single face is reported") {
  const auto mesh = from_triples(4, {kTetra[0], kTetra[1], kTetra[2]});
  const auto violations = validate(mesh);
  CHECK(mentions(violations, "lies on 1 face(s), expected 2"));
}

TEST_CASE("self-loops, weights and inconsistent slots are reported") {
  auto edges = from_triples(4, kTetra).edges();
  auto faces = from_triples(4, kTetra).faces();
  edges[0].weight = 2.0;
  CHECK(mentions(validate(WeightedTriangulation(4, edges, faces)), "edge 0: weight 2 outside [0, pi/2]"));
  edges[0].weight = 0.0;
  std::swap(faces[0].e[0], faces[0].e[1]);
  CHECK(mentions(validate(WeightedTriangulation(4, edges, faces)), "face 0: edge"));
  std::swap(faces[0].e[0], faces[0].e[1]);
  edges[5].b = edges[5].a;
  CHECK(mentions(validate(WeightedTriangulation(4, edges, faces)), "self-loop"));
}

TEST_CASE("out-of-range indices are rejected at construction") {
  CHECK_THROWS_AS(WeightedTriangulation(3, {{0, 5, 0}}, {}), std::invalid_argument);
}

TEST_CASE("disconnected union of two spheres is reported") {
  auto triples = kTetra;
  for (auto t : kTetra) triples.push_back({t[0] + 4, t[1] + 4, t[2] + 4});
  CHECK(mentions(validate(from_triples(8, triples)), "not connected"));
}

TEST_CASE("pinched vertex is not a manifold point") {
  // Two tetrahedra sharing vertex 0.
  auto triples = kTetra;
  for (auto t : kTetra) {
    std::array<int, 3> s{};
    for (int n = 0; n < 3; ++n) s[n] = t[n] == 0 ? 0 : t[n] + 3;
    triples.push_back(s);
  }
  CHECK(mentions(validate(from_triples(7, triples)), "vertex 0: faces around it do not form a single disk"));
}

TEST_CASE("vertex subsets are sorted, proper and nonempty") {
  const VertexSubset s({3, 1, 1}, 5);
  CHECK(s.members() == std::vector<int>{1, 3});
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(0));
  CHECK_THROWS_AS(VertexSubset({}, 5), std::invalid_argument);
  CHECK_THROWS_AS(VertexSubset({0, 1, 2, 3, 4}, 5), std::invalid_argument);
  CHECK_THROWS_AS(VertexSubset({7}, 5), std::invalid_argument);
}

TEST_CASE("subcomplex and link on the tetrahedron") {
  const auto mesh = from_triples(4, kTetra);
  const auto one = subcomplex_and_link(mesh, VertexSubset({0}, 4));
  CHECK(one.vertex_count == 1);
  CHECK(one.edge_count == 0);
  CHECK(one.face_count == 0);
  CHECK(one.euler_char == 1);
  CHECK(one.link_pairs.size() == 3);
  for (const auto& p : one.link_pairs) {
    CHECK(p.vertex == 0);
    const Edge& e = mesh.edge(p.edge);
    CHECK(e.a != 0);
    CHECK(e.b != 0);
  }

  const auto two = subcomplex_and_link(mesh, VertexSubset({0, 1}, 4));
  CHECK(two.vertex_count == 2);
  CHECK(two.edge_count == 1);
  CHECK(two.euler_char == 1);
  REQUIRE(two.link_pairs.size() == 2);
  for (const auto& p : two.link_pairs) {
    const Edge& e = mesh.edge(p.edge);
    CHECK(std::min(e.a, e.b) == 2);
    CHECK(std::max(e.a, e.b) == 3);
  }

  const auto three = subcomplex_and_link(mesh, VertexSubset({0, 1, 2}, 4));
  CHECK(three.face_count == 1);
  CHECK(three.euler_char == 1);
  CHECK(three.link_pairs.empty());
}

TEST_CASE("short loops of the tetrahedron") {
  const auto mesh = from_triples(4, kTetra);
  const auto loops3 = enumerate_short_loops(mesh, 3);
  CHECK(loops3.size() == 4);
  for (const auto& loop : loops3) {
    CHECK(loop.embedded);
    CHECK(loop.bounds_face);
    CHECK(loop.homotopy == Homotopy::null_homotopic);
  }
  int four = 0;
  for (const auto& loop : enumerate_short_loops(mesh, 4)) {
    if (loop.edges.size() != 4) continue;
    ++four;
    CHECK(loop.bounds_two_faces);
    CHECK(loop.homotopy == Homotopy::null_homotopic);
  }
  CHECK(four == 3);
}

TEST_CASE("every face boundary is a null-homotopic 3-loop") {
  for (const char* name : {"torus7", "genus2", "octahedron", "stacked_sphere_violating"}) {
    const auto mesh = fixture(name).mesh;
    const auto loops = enumerate_short_loops(mesh, 3);
    for (const Face& f : mesh.faces()) {
      std::vector<int> edges(f.e.begin(), f.e.end());
      std::sort(edges.begin(), edges.end());
      const auto it = std::find_if(loops.begin(), loops.end(), [&](const ShortLoop& l) {
        auto e = l.edges;
        std::sort(e.begin(), e.end());
        return e == edges;
      });
      REQUIRE(it != loops.end());
      CHECK(it->bounds_face);
      CHECK(it->homotopy == Homotopy::null_homotopic);
    }
  }
}

TEST_CASE("torus loops: homotopy class agrees with Z/2 homology") {
  // On the torus an embedded loop is null-homotopic iff it is a Z/2 boundary.
  const auto mesh = fixture("torus7").mesh;
  int essential = 0, facial = 0;
  for (const auto& loop : enumerate_short_loops(mesh, 4)) {
    if (!loop.embedded) continue;
    const bool boundary = z2_boundary(mesh, loop.edges);
    CHECK(loop.homotopy == (boundary ? Homotopy::null_homotopic : Homotopy::essential));
    if (loop.homotopy == Homotopy::essential) ++essential;
    if (loop.bounds_face) ++facial;
  }
  CHECK(facial == 14);
  CHECK(essential > 0);
}

TEST_CASE("genus-2 loops: Z/2-essential loops are classified essential") {
  const auto mesh = fixture("genus2").mesh;
  for (const auto& loop : enumerate_short_loops(mesh, 4)) {
    if (loop.embedded && !z2_boundary(mesh, loop.edges)) CHECK(loop.homotopy == Homotopy::essential);
  }
}

TEST_CASE("relabeling vertices preserves validity and loop classification") {
  const auto mesh = fixture("torus7_weighted").mesh;
  std::vector<int> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto moved = relabel(mesh, perm);
  CHECK(validate(moved).empty());
  CHECK(euler_characteristic(moved) == 0);
  auto summary = [](const WeightedTriangulation& m) {
    std::vector<std::pair<int, double>> out;
    for (const auto& l : enumerate_short_loops(m, 4)) {
      out.emplace_back(static_cast<int>(l.homotopy) * 10 + static_cast<int>(l.edges.size()), l.weight_sum);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto a = summary(mesh), b = summary(moved);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == b[i].first);
    CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-15));
  }
}

}  // TEST_SUITE
