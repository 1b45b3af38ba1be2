#pragma once

// Weighted generalized triangulations of closed surfaces.
//
// Faces reference their edges explicitly so that parallel edges (two edges
// with the same endpoints) are representable. For face f with vertex slots
// v = (i, j, k), e[n] is the edge joining the two vertices other than v[n]:
// e = (e_jk, e_ki, e_ij).

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace circleflow {

struct Edge {
  int a = 0;
  int b = 0;
  double weight = 0.0;  // intersection angle, radians
};

struct Face {
  std::array<int, 3> v{};
  std::array<int, 3> e{};
};

struct Corner {
  int face = 0;
  int slot = 0;
};

class WeightedTriangulation {
 public:
  /// Throws std::invalid_argument when an index is out of range; every other
  /// structural property is reported by validate().
  WeightedTriangulation(int vertex_count, std::vector<Edge> edges, std::vector<Face> faces);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const Face& face(int f) const { return faces_[f]; }

  /// Weight on the edge opposite slot `slot` of face `f`.
  double face_weight(int f, int slot) const { return edges_[faces_[f].e[slot]].weight; }

  /// Number of edge ends at v (a self-loop counts twice).
  int degree(int v) const { return degree_[v]; }
  const std::vector<int>& incident_edges(int v) const { return vertex_edges_[v]; }
  const std::vector<Corner>& corners(int v) const { return vertex_corners_[v]; }
  /// Face slots whose opposite edge is e.
  const std::vector<Corner>& edge_faces(int e) const { return edge_faces_[e]; }

  bool adjacent(int u, int v) const;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<int> degree_;
  std::vector<std::vector<int>> vertex_edges_;
  std::vector<std::vector<Corner>> vertex_corners_;
  std::vector<std::vector<Corner>> edge_faces_;
};

struct ValidationOptions {
  /// Enforce at most one face per unordered vertex triple. Relaxed mode
  /// admits quotient-style generalized triangulations (experimental).
  bool strict = true;
};

/// Empty iff the mesh is a valid weighted (generalized) triangulation of a
/// closed connected surface. Each entry names the offending cell.
std::vector<std::string> validate(const WeightedTriangulation& mesh,
                                  const ValidationOptions& options = {});

int euler_characteristic(const WeightedTriangulation& mesh);

/// A proper, nonempty set of vertex ids, kept sorted.
class VertexSubset {
 public:
  VertexSubset(std::vector<int> members, int vertex_count);

  const std::vector<int>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(int v) const { return mask_[v] != 0; }

 private:
  std::vector<int> members_;
  std::vector<std::uint8_t> mask_;
};

struct LinkPair {
  int edge = 0;
  int vertex = 0;
  int face = 0;
};

struct SubcomplexStats {
  int vertex_count = 0;
  int edge_count = 0;
  int face_count = 0;
  int euler_char = 0;
  /// One entry per face realizing the pair, so a pair spanning two faces is
  /// listed twice.
  std::vector<LinkPair> link_pairs;
};

/// F_I (cells with all vertices in I) and the link Lk(I).
SubcomplexStats subcomplex_and_link(const WeightedTriangulation& mesh, const VertexSubset& subset);

enum class Homotopy { null_homotopic, essential, undetermined };

std::string_view to_string(Homotopy h);

struct ShortLoop {
  std::vector<int> vertices;  // v0, v1, ..., closing back to v0
  std::vector<int> edges;     // edges[n] joins vertices[n] and vertices[n+1]
  bool embedded = true;
  bool bounds_face = false;       // length 3
  bool bounds_two_faces = false;  // length 4, two faces sharing an edge
  Homotopy homotopy = Homotopy::undetermined;
  double weight_sum = 0.0;
};

/// Homotopy class of the closed edge path `edges` (embedded, distinct
/// vertices): null-homotopic iff it separates and one side is a disk.
Homotopy classify_embedded_loop(const WeightedTriangulation& mesh, const std::vector<int>& edges);

/// All closed edge paths with 3 (and, if max_len == 4, 4) distinct edges,
/// each listed once up to rotation and reversal. Paths that revisit a vertex
/// are kept with embedded = false and an undetermined homotopy verdict.
std::vector<ShortLoop> enumerate_short_loops(const WeightedTriangulation& mesh, int max_len);

}  // namespace circleflow
