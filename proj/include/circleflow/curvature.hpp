#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "circleflow/geometry.hpp"
#include "circleflow/mesh.hpp"

namespace circleflow {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct PackingMetric {
  Geometry geometry = Geometry::euclidean;
  std::vector<double> radii;
};

/// Throws DomainError unless the radii are admissible for the mesh: one
/// positive radius per vertex; spherical radii in (0, pi) with
/// r_i + r_j + r_k < pi on every face.
void check_metric(const WeightedTriangulation& mesh, const PackingMetric& metric);

/// Face `f` as a three-circle configuration under `metric`.
TriangleConfig face_config(const WeightedTriangulation& mesh, const PackingMetric& metric, int f);

struct CurvatureState {
  std::vector<double> cone_angles;
  std::vector<double> curvatures;  // 2*pi - cone angle
  /// Sum of face areas (hyperbolic and spherical only; zero for euclidean).
  double total_area = 0.0;
  /// sum K_i - 2*pi*chi + lambda*Area
  double gb_residual = 0.0;
  /// 2*pi*chi / N
  double avg_curvature = 0.0;
};

inline constexpr double kGaussBonnetTolerance = 1e-9;

/// Cone angles are accumulated per vertex in face order with compensated
/// summation, so results are independent of thread count.
CurvatureState curvature_state(const WeightedTriangulation& mesh, const PackingMetric& metric);

struct UCoordinates {
  Geometry geometry = Geometry::euclidean;
  Eigen::VectorXd u;
};

/// ln r, ln tanh(r/2) or ln tan(r/2).
double u_from_radius(Geometry g, double r);
double radius_from_u(Geometry g, double u);

UCoordinates to_u(const PackingMetric& metric);
PackingMetric from_u(const UCoordinates& coords);

/// a_ij = dK_i/du_j, with entries only on the diagonal and for adjacent
/// vertex pairs.
SparseMatrix curvature_hessian(const WeightedTriangulation& mesh, const PackingMetric& metric);

enum class Definiteness { positive_definite, psd_rank_deficient_1, unknown };

std::string_view to_string(Definiteness d);

/// Certifies definiteness of a symmetric matrix from its sign pattern:
/// strict diagonal dominance gives positive definite; a nonpositive
/// off-diagonal, irreducible matrix with zero column sums is positive
/// semidefinite with kernel spanned by (1, ..., 1). `tol` is relative to the
/// diagonal.
Definiteness diagonal_dominance_verdict(const SparseMatrix& matrix, double tol = 1e-10);

}  // namespace circleflow
