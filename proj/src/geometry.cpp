#include "circleflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "circleflow/errors.hpp"

namespace circleflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative slack on the triangle inequalities before a configuration is
// declared degenerate; inside it the triangle is clamped flat.
constexpr double kFlatTolerance = 1e-9;

double cosh_like(Geometry g, double x) {
  switch (g) {
    case Geometry::hyperbolic: return std::cosh(x);
    case Geometry::spherical: return std::cos(x);
    default: return 1.0;
  }
}

void check_radius(Geometry g, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("radius must be positive and finite, got " + std::to_string(r));
  }
  if (g == Geometry::spherical && !(r < kPi)) {
    throw DomainError("spherical radius must lie in (0, pi), got " + std::to_string(r));
  }
}

void check_weight(double w) {
  if (!(w >= 0.0 && w < kPi)) {
    throw DomainError("intersection angle must lie in [0, pi), got " + std::to_string(w));
  }
}

}  // namespace

int curvature_sign(Geometry g) {
  switch (g) {
    case Geometry::euclidean: return 0;
    case Geometry::hyperbolic: return -1;
    case Geometry::spherical: return 1;
  }
  return 0;
}

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::euclidean: return "euclidean";
    case Geometry::hyperbolic: return "hyperbolic";
    case Geometry::spherical: return "spherical";
  }
  return "unknown";
}

Geometry geometry_from_string(std::string_view name) {
  if (name == "euclidean") return Geometry::euclidean;
  if (name == "hyperbolic") return Geometry::hyperbolic;
  if (name == "spherical") return Geometry::spherical;
  throw DomainError("unknown geometry '" + std::string(name) + "'");
}

double s_func(Geometry g, double x) {
  switch (g) {
    case Geometry::euclidean: return x;
    case Geometry::hyperbolic: return std::sinh(x);
    case Geometry::spherical: return std::sin(x);
  }
  return x;
}

// All three cosine laws are evaluated in half-angle form,
//   s(x/2)^2 = s((ra+rb)/2)^2 - s(ra) s(rb) sin(w/2)^2,
// which is exact at tangency and avoids acos/acosh near 1.
double edge_length(Geometry g, double ra, double rb, double weight) {
  check_radius(g, ra);
  check_radius(g, rb);
  check_weight(weight);
  if (weight == 0.0) return ra + rb;

  const double sw = std::sin(0.5 * weight);
  const double defect = s_func(g, ra) * s_func(g, rb) * sw * sw;
  switch (g) {
    case Geometry::euclidean: {
      const double sum = ra + rb;
      return std::sqrt(std::max(0.0, sum * sum - 4.0 * defect));
    }
    case Geometry::hyperbolic: {
      const double half = std::sinh(0.5 * (ra + rb));
      return 2.0 * std::asinh(std::sqrt(std::max(0.0, half * half - defect)));
    }
    case Geometry::spherical: {
      const double half = std::sin(0.5 * (ra + rb));
      double arg = half * half - defect;
      if (arg < -kFlatTolerance || arg > 1.0 + kFlatTolerance) {
        throw DomainError("spherical edge length argument outside [0, 1]");
      }
      arg = std::clamp(arg, 0.0, 1.0);
      return 2.0 * std::asin(std::sqrt(arg));
    }
  }
  return 0.0;
}

double edge_length_dr(Geometry g, double ra, double rb, double weight, double length) {
  const double c = std::cos(weight);
  switch (g) {
    case Geometry::euclidean:
      return (ra + rb * c) / length;
    case Geometry::hyperbolic:
      return (std::sinh(ra) * std::cosh(rb) + std::cosh(ra) * std::sinh(rb) * c) /
             std::sinh(length);
    case Geometry::spherical:
      return (std::sin(ra) * std::cos(rb) + std::cos(ra) * std::sin(rb) * c) /
             std::sin(length);
  }
  return 0.0;
}

TriangleAngles angles_from_lengths(Geometry g, const std::array<double, 3>& lengths) {
  TriangleAngles out;
  out.lengths = lengths;
  const double p = 0.5 * (lengths[0] + lengths[1] + lengths[2]);
  if (!(p > 0.0) || !std::isfinite(p)) throw DegenerateTriangle("non-positive perimeter");
  if (g == Geometry::spherical && !(p < kPi)) {
    throw DegenerateTriangle("spherical triangle perimeter must be below 2*pi");
  }

  std::array<double, 3> excess{};
  for (int n = 0; n < 3; ++n) {
    excess[n] = p - lengths[n];
    if (excess[n] < -kFlatTolerance * p) {
      throw DegenerateTriangle("triangle inequality violated at side " + std::to_string(n));
    }
    excess[n] = std::max(0.0, excess[n]);
  }

  const double sp = s_func(g, p);
  std::array<double, 3> se{};
  for (int n = 0; n < 3; ++n) se[n] = s_func(g, excess[n]);

  double sum = 0.0;
  for (int n = 0; n < 3; ++n) {
    const int a = (n + 1) % 3;
    const int b = (n + 2) % 3;
    // tan(theta_n / 2)^2 = s(p - x_a) s(p - x_b) / (s(p) s(p - x_n))
    out.angles[n] = 2.0 * std::atan2(std::sqrt(se[a] * se[b]), std::sqrt(sp * se[n]));
    sum += out.angles[n];
  }
  out.area_term = sum - kPi;
  out.sine_norm = s_func(g, lengths[0]) * s_func(g, lengths[1]) * std::sin(out.angles[2]);
  return out;
}

TriangleAngles tri_angles(const TriangleConfig& config) {
  const auto& r = config.radii;
  for (double radius : r) check_radius(config.geometry, radius);
  if (config.geometry == Geometry::spherical && !(r[0] + r[1] + r[2] < kPi)) {
    throw DomainError("spherical face needs r_i + r_j + r_k < pi");
  }
  std::array<double, 3> lengths{};
  for (int n = 0; n < 3; ++n) {
    lengths[n] = edge_length(config.geometry, r[(n + 1) % 3], r[(n + 2) % 3], config.weights[n]);
  }
  return angles_from_lengths(config.geometry, lengths);
}

Matrix3 dtheta_dx(const TriangleAngles& angles, Geometry g) {
  Matrix3 d;
  const double norm = angles.sine_norm;
  for (int n = 0; n < 3; ++n) {
    const double diag = s_func(g, angles.lengths[n]) / norm;
    d(n, n) = diag;
    for (int m = 0; m < 3; ++m) {
      if (m == n) continue;
      const int third = 3 - n - m;
      d(n, m) = -diag * std::cos(angles.angles[third]);
    }
  }
  return d;
}

Matrix3 dtheta_dr(const TriangleConfig& config) {
  return dtheta_dr(config, tri_angles(config));
}

Matrix3 dtheta_dr(const TriangleConfig& config, const TriangleAngles& angles) {
  const Geometry g = config.geometry;
  // dx(l, m) = d x_l / d r_m; x_l does not depend on r_l.
  Matrix3 dx = Matrix3::Zero();
  for (int l = 0; l < 3; ++l) {
    for (int m = 0; m < 3; ++m) {
      if (m == l) continue;
      const int other = 3 - l - m;
      dx(l, m) = edge_length_dr(g, config.radii[m], config.radii[other], config.weights[l],
                                angles.lengths[l]);
    }
  }
  return dtheta_dx(angles, g) * dx;
}

}  // namespace circleflow
