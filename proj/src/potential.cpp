#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "circleflow/flow.hpp"

namespace circleflow {

namespace {

template <unsigned Points, class F>
double integrate_panels(F&& f, int panels) {
  double total = 0.0;
  const double width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    total += boost::math::quadrature::gauss<double, Points>::integrate(f, p * width, (p + 1) * width);
  }
  return total;
}

}  // namespace

double potential_value(const WeightedTriangulation& mesh, const UCoordinates& u,
                       const UCoordinates& base, const std::vector<double>& targets,
                       const QuadratureOptions& options) {
  if (u.geometry != base.geometry || u.u.size() != base.u.size() ||
      u.u.size() != mesh.vertex_count() || static_cast<int>(targets.size()) != mesh.vertex_count()) {
    throw DomainError("potential_value: inconsistent inputs");
  }
  if (options.panels < 1) throw std::invalid_argument("quadrature needs at least one panel");
  const Eigen::VectorXd direction = u.u - base.u;
  if (direction.isZero(0.0)) return 0.0;

  // d/ds f(base + s * direction) = sum_i (K_i - target_i) direction_i
  auto integrand = [&](double s) {
    const UCoordinates point{u.geometry, base.u + s * direction};
    PackingMetric metric;
    std::vector<double> curvatures;
    try {
      metric = from_u(point);
      curvatures = curvature_state(mesh, metric).curvatures;
    } catch (const DegenerateTriangle&) {
      throw DomainError("potential path leaves the metric domain");
    }
    double value = 0.0;
    for (Eigen::Index i = 0; i < direction.size(); ++i) {
      value += (curvatures[i] - targets[i]) * direction[i];
    }
    return value;
  };

  switch (options.order) {
    case 7: return integrate_panels<7>(integrand, options.panels);
    case 10: return integrate_panels<10>(integrand, options.panels);
    case 15: return integrate_panels<15>(integrand, options.panels);
    case 20: return integrate_panels<20>(integrand, options.panels);
    case 25: return integrate_panels<25>(integrand, options.panels);
    case 30: return integrate_panels<30>(integrand, options.panels);
    default: throw std::invalid_argument("unsupported Gauss-Legendre order");
  }
}

}  // namespace circleflow
