#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>
#include <numbers>
#include <random>
#include <string>

#include "circleflow/curvature.hpp"
#include "circleflow/geometry.hpp"
#include "circleflow/io.hpp"

namespace testing_support {

using namespace circleflow;

inline constexpr double pi = std::numbers::pi;

inline std::string data_path(const std::string& name) {
  return std::string(CIRCLEFLOW_DATA_DIR) + "/" + name + ".json";
}

inline MeshFile fixture(const std::string& name) { return parse_mesh(data_path(name)); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random radii in [lo, hi]; spherical metrics are drawn small enough that
/// every face satisfies r_i + r_j + r_k < pi.
inline PackingMetric random_metric(const WeightedTriangulation& mesh, Geometry g, std::mt19937_64& rng,
                                   double lo = 0.5, double hi = 2.0) {
  PackingMetric metric{g, {}};
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    metric.radii.push_back(g == Geometry::spherical ? uniform(rng, 0.1, 0.9) : uniform(rng, lo, hi));
  }
  return metric;
}

/// Random triangle that exists and stays away from degeneracy: every angle is
/// at least `min_angle`.
inline TriangleConfig random_triangle(Geometry g, std::mt19937_64& rng, double max_weight,
                                      double min_angle = 0.05, double max_spherical_radius = 1.0) {
  while (true) {
    TriangleConfig c;
    c.geometry = g;
    for (int n = 0; n < 3; ++n) {
      c.radii[n] = g == Geometry::spherical ? uniform(rng, 0.05, max_spherical_radius) : uniform(rng, 0.1, 2.5);
      c.weights[n] = uniform(rng, 0.0, max_weight);
    }
    try {
      const auto ang = tri_angles(c);
      bool ok = true;
      for (double a : ang.angles) ok = ok && a > min_angle && a < pi - min_angle;
      if (ok) return c;
    } catch (const Error&) {
    }
  }
}

}  // namespace testing_support

namespace testing_support {

/// Simplicial mesh from vertex triples; edges are numbered in order of first
/// appearance, as the fixture generator does.
inline WeightedTriangulation from_triples(int n, const std::vector<std::array<int, 3>>& triples,
                                          const std::vector<double>& weights = {}) {
  std::map<std::pair<int, int>, int> ids;
  std::vector<Edge> edges;
  std::vector<Face> faces;
  for (const auto& t : triples) {
    Face f{t, {}};
    for (int k = 0; k < 3; ++k) {
      const int a = std::min(t[(k + 1) % 3], t[(k + 2) % 3]);
      const int b = std::max(t[(k + 1) % 3], t[(k + 2) % 3]);
      auto [it, fresh] = ids.emplace(std::pair{a, b}, static_cast<int>(edges.size()));
      if (fresh) edges.push_back({a, b, 0.0});
      f.e[k] = it->second;
    }
    faces.push_back(f);
  }
  for (std::size_t e = 0; e < weights.size() && e < edges.size(); ++e) edges[e].weight = weights[e];
  return WeightedTriangulation(n, std::move(edges), std::move(faces));
}

/// Same surface with vertex v renamed perm[v].
inline WeightedTriangulation relabel(const WeightedTriangulation& mesh, const std::vector<int>& perm) {
  std::vector<Edge> edges = mesh.edges();
  for (Edge& e : edges) {
    e.a = perm[e.a];
    e.b = perm[e.b];
  }
  std::vector<Face> faces = mesh.faces();
  for (Face& f : faces) {
    for (int& v : f.v) v = perm[v];
  }
  return WeightedTriangulation(mesh.vertex_count(), std::move(edges), std::move(faces));
}

}  // namespace testing_support

namespace testing_support {

/// Radii divided by their geometric mean.
inline std::vector<double> normalized(const std::vector<double>& radii) {
  double log_mean = 0.0;
  for (double r : radii) log_mean += std::log(r);
  log_mean /= static_cast<double>(radii.size());
  std::vector<double> out;
  for (double r : radii) out.push_back(r / std::exp(log_mean));
  return out;
}

inline double max_relative_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]) / std::abs(b[i]));
  return out;
}

inline PackingMetric perturbed(const PackingMetric& base, std::mt19937_64& rng, double fraction) {
  PackingMetric out = base;
  for (double& r : out.radii) r *= 1.0 + uniform(rng, -fraction, fraction);
  return out;
}

}  // namespace testing_support
