#include "circleflow/curvature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "circleflow/errors.hpp"
#include "parallel.hpp"
#include "union_find.hpp"

namespace circleflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kParallelFaces = 4096;

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

std::vector<TriangleAngles> all_face_angles(const WeightedTriangulation& mesh,
                                            const PackingMetric& metric) {
  std::vector<TriangleAngles> out(mesh.face_count());
  detail::parallel_for(out.size(), kParallelFaces, [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      out[f] = tri_angles(face_config(mesh, metric, static_cast<int>(f)));
    }
  });
  return out;
}

}  // namespace

void check_metric(const WeightedTriangulation& mesh, const PackingMetric& metric) {
  if (static_cast<int>(metric.radii.size()) != mesh.vertex_count()) {
    throw DomainError("metric has " + std::to_string(metric.radii.size()) + " radii for " +
                      std::to_string(mesh.vertex_count()) + " vertices");
  }
  for (std::size_t i = 0; i < metric.radii.size(); ++i) {
    const double r = metric.radii[i];
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw DomainError("radius of vertex " + std::to_string(i) + " is not positive");
    }
    if (metric.geometry == Geometry::spherical && !(r < std::numbers::pi)) {
      throw DomainError("spherical radius of vertex " + std::to_string(i) + " is not below pi");
    }
  }
  if (metric.geometry == Geometry::spherical) {
    for (int f = 0; f < mesh.face_count(); ++f) {
      const auto& v = mesh.face(f).v;
      if (!(metric.radii[v[0]] + metric.radii[v[1]] + metric.radii[v[2]] < std::numbers::pi)) {
        throw DomainError("spherical face " + std::to_string(f) + " violates r_i + r_j + r_k < pi");
      }
    }
  }
}

TriangleConfig face_config(const WeightedTriangulation& mesh, const PackingMetric& metric, int f) {
  const Face& face = mesh.face(f);
  TriangleConfig config;
  config.geometry = metric.geometry;
  for (int n = 0; n < 3; ++n) {
    config.radii[n] = metric.radii[face.v[n]];
    config.weights[n] = mesh.face_weight(f, n);
  }
  return config;
}

CurvatureState curvature_state(const WeightedTriangulation& mesh, const PackingMetric& metric) {
  check_metric(mesh, metric);
  const auto angles = all_face_angles(mesh, metric);

  const int n = mesh.vertex_count();
  std::vector<CompensatedSum> cone(n);
  CompensatedSum area_term;
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int slot = 0; slot < 3; ++slot) cone[mesh.face(f).v[slot]].add(angles[f].angles[slot]);
    area_term.add(angles[f].area_term);
  }

  CurvatureState state;
  state.cone_angles.resize(n);
  state.curvatures.resize(n);
  CompensatedSum total;
  for (int i = 0; i < n; ++i) {
    state.cone_angles[i] = cone[i].value();
    state.curvatures[i] = kTwoPi - state.cone_angles[i];
    total.add(state.curvatures[i]);
  }
  const int chi = euler_characteristic(mesh);
  const int lambda = curvature_sign(metric.geometry);
  state.total_area = lambda == 0 ? 0.0 : area_term.value() / lambda;
  total.add(-kTwoPi * chi);
  total.add(area_term.value());
  state.gb_residual = total.value();
  state.avg_curvature = kTwoPi * chi / n;
  return state;
}

double u_from_radius(Geometry g, double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  switch (g) {
    case Geometry::euclidean:
      return std::log(r);
    case Geometry::hyperbolic: {
      if (r < 1.0) return std::log(std::tanh(0.5 * r));
      const double q = std::exp(-r);
      return std::log1p(-q) - std::log1p(q);
    }
    case Geometry::spherical:
      if (!(r < std::numbers::pi)) throw DomainError("spherical radius must be below pi");
      return std::log(std::tan(0.5 * r));
  }
  return 0.0;
}

double radius_from_u(Geometry g, double u) {
  if (!std::isfinite(u)) throw DomainError("u-coordinate is not finite");
  switch (g) {
    case Geometry::euclidean:
      return std::exp(u);
    case Geometry::hyperbolic:
      if (!(u < 0.0)) throw DomainError("hyperbolic u-coordinate must be negative");
      // 2 atanh(e^u) = ln(1 + e^u) - ln(1 - e^u)
      return std::log1p(std::exp(u)) - std::log(-std::expm1(u));
    case Geometry::spherical:
      return 2.0 * std::atan(std::exp(u));
  }
  return 0.0;
}

UCoordinates to_u(const PackingMetric& metric) {
  UCoordinates out{metric.geometry, Eigen::VectorXd(metric.radii.size())};
  for (std::size_t i = 0; i < metric.radii.size(); ++i) {
    out.u[static_cast<Eigen::Index>(i)] = u_from_radius(metric.geometry, metric.radii[i]);
  }
  return out;
}

PackingMetric from_u(const UCoordinates& coords) {
  PackingMetric out{coords.geometry, std::vector<double>(coords.u.size())};
  for (Eigen::Index i = 0; i < coords.u.size(); ++i) {
    out.radii[i] = radius_from_u(coords.geometry, coords.u[i]);
    if (!(out.radii[i] > 0.0)) throw DomainError("u-coordinate maps to a zero radius");
  }
  return out;
}

SparseMatrix curvature_hessian(const WeightedTriangulation& mesh, const PackingMetric& metric) {
  check_metric(mesh, metric);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * static_cast<std::size_t>(mesh.face_count()));
  for (int f = 0; f < mesh.face_count(); ++f) {
    const TriangleConfig config = face_config(mesh, metric, f);
    const Matrix3 d = dtheta_dr(config);
    const auto& v = mesh.face(f).v;
    for (int n = 0; n < 3; ++n) {
      for (int m = 0; m < 3; ++m) {
        triplets.emplace_back(v[n], v[m], -d(n, m) * s_func(metric.geometry, config.radii[m]));
      }
    }
  }
  SparseMatrix hessian(mesh.vertex_count(), mesh.vertex_count());
  hessian.setFromTriplets(triplets.begin(), triplets.end());
  return hessian;
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::positive_definite: return "positive_definite";
    case Definiteness::psd_rank_deficient_1: return "psd_rank_deficient_1";
    case Definiteness::unknown: return "unknown";
  }
  return "unknown";
}

Definiteness diagonal_dominance_verdict(const SparseMatrix& matrix, double tol) {
  const Eigen::Index n = matrix.rows();
  if (n == 0 || matrix.cols() != n) return Definiteness::unknown;

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off_abs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd col_sum = Eigen::VectorXd::Zero(n);
  bool nonpositive_off = true;
  detail::UnionFind coupling(static_cast<int>(n));
  for (Eigen::Index col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
      const auto i = it.row();
      const auto j = it.col();
      col_sum[j] += it.value();
      if (i == j) {
        diag[i] += it.value();
      } else {
        off_abs[i] += std::abs(it.value());
        if (it.value() > 0.0) nonpositive_off = false;
        if (it.value() != 0.0) coupling.unite(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }

  if (((diag - off_abs).array() > tol * diag.array()).all()) return Definiteness::positive_definite;

  const bool positive_diag = (diag.array() > 0.0).all();
  const bool zero_sums = (col_sum.array().abs() <= tol * diag.array()).all();
  if (positive_diag && nonpositive_off && zero_sums && coupling.components() == 1) {
    return Definiteness::psd_rank_deficient_1;
  }
  return Definiteness::unknown;
}

}  // namespace circleflow
