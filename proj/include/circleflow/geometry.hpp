#pragma once

// Single-face geometry of three mutually intersecting circles in the
// Euclidean plane, the hyperbolic plane, or the unit sphere.
//
// Slot convention: for a face with vertex slots (i, j, k), lengths[n] is the
// distance between the two centers other than n (the edge opposite n), and
// weights[n] is the intersection angle prescribed on that edge.

#include <array>
#include <string_view>

#include <Eigen/Core>

namespace circleflow {

enum class Geometry { euclidean, hyperbolic, spherical };

/// Constant curvature of the model space: 0, -1 or +1.
int curvature_sign(Geometry g);

std::string_view to_string(Geometry g);
Geometry geometry_from_string(std::string_view name);

/// x, sinh(x) or sin(x).
double s_func(Geometry g, double x);

/// Distance between the centers of two circles of radii ra, rb meeting at
/// angle `weight` (weight = 0 is tangency).
double edge_length(Geometry g, double ra, double rb, double weight);

/// d(edge_length)/d(ra) with rb and weight held fixed.
double edge_length_dr(Geometry g, double ra, double rb, double weight, double length);

struct TriangleConfig {
  Geometry geometry = Geometry::euclidean;
  std::array<double, 3> radii{};
  std::array<double, 3> weights{};
};

struct TriangleAngles {
  std::array<double, 3> lengths{};
  std::array<double, 3> angles{};
  /// lambda * area = angle sum - pi.
  double area_term = 0.0;
  /// s(x_i) s(x_j) sin(theta_k); identical for every rotation of (i, j, k).
  double sine_norm = 0.0;
};

using Matrix3 = Eigen::Matrix3d;

/// Inner angles of the triangle with the given side lengths. Throws
/// DegenerateTriangle when the lengths violate a triangle inequality by more
/// than the rounding tolerance.
TriangleAngles angles_from_lengths(Geometry g, const std::array<double, 3>& lengths);

/// Centers triangle of the three-circle configuration. Radii must be positive,
/// weights in [0, pi); spherical configurations need r_i + r_j + r_k < pi.
TriangleAngles tri_angles(const TriangleConfig& config);

/// (n, m) = d theta_n / d x_m.
Matrix3 dtheta_dx(const TriangleAngles& angles, Geometry g);

/// (n, m) = d theta_n / d r_m, by the chain rule through the edge lengths.
Matrix3 dtheta_dr(const TriangleConfig& config);

/// Same as dtheta_dr, reusing angles already computed for `config`.
Matrix3 dtheta_dr(const TriangleConfig& config, const TriangleAngles& angles);

}  // namespace circleflow
