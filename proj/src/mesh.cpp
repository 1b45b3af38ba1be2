#include "circleflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "union_find.hpp"

namespace circleflow {

namespace {

std::array<int, 3> sorted3(std::array<int, 3> a) {
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

WeightedTriangulation::WeightedTriangulation(int vertex_count, std::vector<Edge> edges,
                                             std::vector<Face> faces)
    : vertex_count_(vertex_count), edges_(std::move(edges)), faces_(std::move(faces)) {
  if (vertex_count_ <= 0) throw std::invalid_argument("mesh needs at least one vertex");
  degree_.assign(vertex_count_, 0);
  vertex_edges_.resize(vertex_count_);
  vertex_corners_.resize(vertex_count_);
  edge_faces_.resize(edges_.size());

  for (int e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.a < 0 || ed.a >= vertex_count_ || ed.b < 0 || ed.b >= vertex_count_) {
      throw std::invalid_argument("edge " + std::to_string(e) + " has an endpoint out of range");
    }
    ++degree_[ed.a];
    ++degree_[ed.b];
    vertex_edges_[ed.a].push_back(e);
    if (ed.b != ed.a) vertex_edges_[ed.b].push_back(e);
  }
  for (int f = 0; f < face_count(); ++f) {
    for (int n = 0; n < 3; ++n) {
      const int v = faces_[f].v[n];
      const int e = faces_[f].e[n];
      if (v < 0 || v >= vertex_count_) {
        throw std::invalid_argument("face " + std::to_string(f) + " has a vertex out of range");
      }
      if (e < 0 || e >= edge_count()) {
        throw std::invalid_argument("face " + std::to_string(f) + " has an edge out of range");
      }
      vertex_corners_[v].push_back({f, n});
      edge_faces_[e].push_back({f, n});
    }
  }
}

bool WeightedTriangulation::adjacent(int u, int v) const {
  for (int e : vertex_edges_[u]) {
    const Edge& ed = edges_[e];
    if ((ed.a == u && ed.b == v) || (ed.a == v && ed.b == u)) return true;
  }
  return false;
}

std::vector<std::string> validate(const WeightedTriangulation& mesh, const ValidationOptions& options) {
  std::vector<std::string> out;
  auto report = [&out](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    out.push_back(os.str());
  };

  for (int e = 0; e < mesh.edge_count(); ++e) {
    const Edge& ed = mesh.edge(e);
    if (ed.a == ed.b) report("edge ", e, ": self-loop at vertex ", ed.a);
    if (!(ed.weight >= 0.0 && ed.weight <= std::numbers::pi / 2)) {
      report("edge ", e, ": weight ", ed.weight, " outside [0, pi/2]");
    }
  }

  for (int f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.face(f);
    for (int n = 0; n < 3; ++n) {
      const Edge& ed = mesh.edge(face.e[n]);
      const int p = face.v[(n + 1) % 3];
      const int q = face.v[(n + 2) % 3];
      if (!((ed.a == p && ed.b == q) || (ed.a == q && ed.b == p))) {
        report("face ", f, ": edge ", face.e[n], " in slot ", n, " does not join vertices ", p,
               " and ", q);
      }
    }
  }

  bool closed = true;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto count = mesh.edge_faces(e).size();
    if (count != 2) {
      closed = false;
      report("edge ", e, ": lies on ", count, " face(s), expected 2");
    }
  }

  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (mesh.degree(v) < 3) report("vertex ", v, ": degree ", mesh.degree(v), " < 3");
  }

  {
    std::map<std::array<int, 3>, int> by_edges;
    std::map<std::array<int, 3>, int> by_vertices;
    for (int f = 0; f < mesh.face_count(); ++f) {
      auto [it, fresh] = by_edges.emplace(sorted3(mesh.face(f).e), f);
      if (!fresh) report("face ", f, ": same edge triple as face ", it->second);
      if (options.strict) {
        auto [vit, vfresh] = by_vertices.emplace(sorted3(mesh.face(f).v), f);
        if (!vfresh) report("face ", f, ": same vertex triple as face ", vit->second, " (strict mode)");
      }
    }
  }

  // Corners around each vertex must form a single cycle.
  bool manifold = closed;
  if (closed) {
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      const auto& corners = mesh.corners(v);
      if (corners.empty()) continue;
      detail::UnionFind uf(static_cast<int>(corners.size()));
      std::map<int, int> first_corner_on_edge;
      for (int c = 0; c < static_cast<int>(corners.size()); ++c) {
        const Face& face = mesh.face(corners[c].face);
        for (int step : {1, 2}) {
          const int e = face.e[(corners[c].slot + step) % 3];
          auto [it, fresh] = first_corner_on_edge.emplace(e, c);
          if (!fresh) uf.unite(it->second, c);
        }
      }
      if (uf.components() != 1) {
        manifold = false;
        report("vertex ", v, ": faces around it do not form a single disk");
      }
    }
  }

  {
    detail::UnionFind uf(mesh.vertex_count());
    for (const Edge& ed : mesh.edges()) uf.unite(ed.a, ed.b);
    if (uf.components() != 1) report("mesh: surface is not connected");
  }

  // Bigons bounding a disk are null-homotopic 2-edge loops.
  if (manifold) {
    std::map<std::pair<int, int>, std::vector<int>> parallel;
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const Edge& ed = mesh.edge(e);
      if (ed.a == ed.b) continue;
      parallel[{std::min(ed.a, ed.b), std::max(ed.a, ed.b)}].push_back(e);
    }
    for (const auto& [ends, list] : parallel) {
      for (std::size_t x = 0; x < list.size(); ++x) {
        for (std::size_t y = x + 1; y < list.size(); ++y) {
          if (classify_embedded_loop(mesh, {list[x], list[y]}) == Homotopy::null_homotopic) {
            report("edges ", list[x], ", ", list[y], ": null-homotopic 2-edge loop");
          }
        }
      }
    }
  }
  return out;
}

int euler_characteristic(const WeightedTriangulation& mesh) {
  return mesh.vertex_count() - mesh.edge_count() + mesh.face_count();
}

VertexSubset::VertexSubset(std::vector<int> members, int vertex_count)
    : members_(std::move(members)), mask_(vertex_count, 0) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw std::invalid_argument("vertex subset is empty");
  if (static_cast<int>(members_.size()) >= vertex_count) {
    throw std::invalid_argument("vertex subset must be a proper subset");
  }
  for (int v : members_) {
    if (v < 0 || v >= vertex_count) throw std::invalid_argument("vertex subset id out of range");
    mask_[v] = 1;
  }
}

SubcomplexStats subcomplex_and_link(const WeightedTriangulation& mesh, const VertexSubset& subset) {
  SubcomplexStats stats;
  stats.vertex_count = static_cast<int>(subset.size());
  for (const Edge& ed : mesh.edges()) {
    stats.edge_count += subset.contains(ed.a) && subset.contains(ed.b);
  }
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Face& face = mesh.face(f);
    int inside = 0;
    for (int v : face.v) inside += subset.contains(v);
    stats.face_count += inside == 3;
    for (int n = 0; n < 3; ++n) {
      if (!subset.contains(face.v[n])) continue;
      const Edge& opp = mesh.edge(face.e[n]);
      if (!subset.contains(opp.a) && !subset.contains(opp.b)) {
        stats.link_pairs.push_back({face.e[n], face.v[n], f});
      }
    }
  }
  stats.euler_char = stats.vertex_count - stats.edge_count + stats.face_count;
  return stats;
}

std::string_view to_string(Homotopy h) {
  switch (h) {
    case Homotopy::null_homotopic: return "null_homotopic";
    case Homotopy::essential: return "essential";
    case Homotopy::undetermined: return "undetermined";
  }
  return "undetermined";
}

Homotopy classify_embedded_loop(const WeightedTriangulation& mesh, const std::vector<int>& edges) {
  std::vector<std::uint8_t> on_loop(mesh.edge_count(), 0);
  for (int e : edges) on_loop[e] = 1;

  detail::UnionFind uf(mesh.face_count());
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (on_loop[e]) continue;
    const auto& incident = mesh.edge_faces(e);
    for (std::size_t k = 1; k < incident.size(); ++k) uf.unite(incident[0].face, incident[k].face);
  }

  std::map<int, std::vector<int>> regions;
  for (int f = 0; f < mesh.face_count(); ++f) regions[uf.find(f)].push_back(f);
  if (regions.size() < 2) return Homotopy::essential;  // non-separating
  if (regions.size() > 2) return Homotopy::undetermined;

  // A side of a separating simple closed curve has one boundary circle, so it
  // is a disk exactly when its Euler characteristic is 1.
  for (const auto& [root, faces] : regions) {
    std::set<int> vertices, region_edges;
    for (int f : faces) {
      for (int n = 0; n < 3; ++n) {
        vertices.insert(mesh.face(f).v[n]);
        region_edges.insert(mesh.face(f).e[n]);
      }
    }
    const auto chi = static_cast<long>(vertices.size()) - static_cast<long>(region_edges.size()) +
                     static_cast<long>(faces.size());
    if (chi == 1) return Homotopy::null_homotopic;
  }
  return Homotopy::essential;
}

namespace {

std::vector<int> canonical_cycle(const std::vector<int>& seq) {
  const std::size_t n = seq.size();
  std::vector<int> best;
  std::vector<int> candidate(n);
  for (int dir : {1, -1}) {
    for (std::size_t start = 0; start < n; ++start) {
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t idx = dir == 1 ? (start + k) % n : (start + n - k) % n;
        candidate[k] = seq[idx];
      }
      if (best.empty() || candidate < best) best = candidate;
    }
  }
  return best;
}

struct LoopSearch {
  const WeightedTriangulation& mesh;
  int length;
  std::map<std::vector<int>, ShortLoop> found;
  std::vector<int> vertices;
  std::vector<int> edges;

  void extend(int current) {
    if (static_cast<int>(edges.size()) == length) {
      if (current != vertices.front()) return;
      auto key = canonical_cycle(edges);
      if (found.count(key)) return;
      ShortLoop loop;
      loop.vertices = vertices;
      loop.edges = edges;
      std::set<int> distinct(vertices.begin(), vertices.end());
      loop.embedded = static_cast<int>(distinct.size()) == length;
      found.emplace(std::move(key), std::move(loop));
      return;
    }
    for (int e : mesh.incident_edges(current)) {
      if (std::find(edges.begin(), edges.end(), e) != edges.end()) continue;
      const Edge& ed = mesh.edge(e);
      const int next = ed.a == current ? ed.b : ed.a;
      const bool closing = static_cast<int>(edges.size()) + 1 == length;
      edges.push_back(e);
      if (!closing) vertices.push_back(next);
      extend(next);
      if (!closing) vertices.pop_back();
      edges.pop_back();
    }
  }
};

}  // namespace

std::vector<ShortLoop> enumerate_short_loops(const WeightedTriangulation& mesh, int max_len) {
  if (max_len < 3 || max_len > 4) throw std::invalid_argument("max_len must be 3 or 4");

  std::set<std::vector<int>> face_triples;
  for (const Face& face : mesh.faces()) {
    auto t = sorted3(face.e);
    face_triples.insert({t.begin(), t.end()});
  }
  std::set<std::vector<int>> face_pairs;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto& incident = mesh.edge_faces(e);
    if (incident.size() != 2 || incident[0].face == incident[1].face) continue;
    std::vector<int> quad;
    for (const Corner& c : incident) {
      for (int m = 0; m < 3; ++m) {
        if (m != c.slot) quad.push_back(mesh.face(c.face).e[m]);
      }
    }
    std::sort(quad.begin(), quad.end());
    face_pairs.insert(quad);
  }

  std::vector<ShortLoop> out;
  for (int length = 3; length <= max_len; ++length) {
    LoopSearch search{mesh, length, {}, {}, {}};
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      search.vertices = {v};
      search.edges.clear();
      search.extend(v);
    }
    for (auto& [key, loop] : search.found) {
      std::vector<int> sorted_edges = loop.edges;
      std::sort(sorted_edges.begin(), sorted_edges.end());
      if (length == 3) loop.bounds_face = face_triples.count(sorted_edges) > 0;
      if (length == 4) loop.bounds_two_faces = face_pairs.count(sorted_edges) > 0;
      for (int e : loop.edges) loop.weight_sum += mesh.edge(e).weight;
      loop.homotopy = loop.embedded ? classify_embedded_loop(mesh, loop.edges) : Homotopy::undetermined;
      out.push_back(std::move(loop));
    }
  }
  return out;
}

}  // namespace circleflow
