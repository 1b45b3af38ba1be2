#include <doctest.h>

#include <Eigen/Dense>

#include "circleflow/curvature.hpp"
#include "circleflow/errors.hpp"
#include "fd.hpp"
#include "support.hpp"

using namespace circleflow;
using namespace testing_support;

namespace {

MeshFile as_geometry(const char* name, Geometry g) {
  MeshFile f = fixture(name);
  f.geometry = g;
  f.metric.geometry = g;
  return f;
}

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_SUITE("curvature") {

TEST_CASE("equal radii on the tetrahedron: K = pi") {
  const auto f = fixture("tetrahedron");
  const auto state = curvature_state(f.mesh, {Geometry::euclidean, {2.5, 2.5, 2.5, 2.5}});
  for (int i = 0; i < 4; ++i) {
    CHECK(state.cone_angles[i] == doctest::Approx(pi).epsilon(1e-14));
    CHECK(state.curvatures[i] == doctest::Approx(pi).epsilon(1e-14));
  }
  CHECK(state.avg_curvature == doctest::Approx(pi).epsilon(1e-15));
  CHECK(std::abs(state.gb_residual) < 1e-12);
}

TEST_CASE("equal radii on the degree-regular torus: K = 0") {
  const auto f = fixture("torus7");
  const auto state = curvature_state(f.mesh, f.metric);
  for (double k : state.curvatures) CHECK(std::abs(k) < 1e-13);
}

TEST_CASE("Gauss-Bonnet residual on random metrics") {
  std::mt19937_64 rng(21);
  for (const char* name : {"tetrahedron", "torus7", "torus7_weighted", "genus2", "octahedron"}) {
    for (Geometry g : {Geometry::euclidean, Geometry::hyperbolic}) {
      const auto f = as_geometry(name, g);
      for (int trial = 0; trial < 20; ++trial) {
        const auto state = curvature_state(f.mesh, random_metric(f.mesh, g, rng));
        CHECK(std::abs(state.gb_residual) < 1e-10);
        if (g == Geometry::hyperbolic) CHECK(state.total_area > 0);
      }
    }
  }
  const auto sphere = fixture("tetrahedron_spherical");
  for (int trial = 0; trial < 20; ++trial) {
    const auto state = curvature_state(sphere.mesh, random_metric(sphere.mesh, Geometry::spherical, rng));
    CHECK(std::abs(state.gb_residual) < 1e-10);
  }
}

TEST_CASE("metric checks") {
  const auto f = fixture("tetrahedron");
  CHECK_THROWS_AS(curvature_state(f.mesh, {Geometry::euclidean, {1, 1, 1}}), DomainError);
  CHECK_THROWS_AS(curvature_state(f.mesh, {Geometry::euclidean, {1, 1, 0, 1}}), DomainError);
  CHECK_THROWS_AS(curvature_state(f.mesh, {Geometry::spherical, {1.2, 1.2, 1.2, 1.2}}), DomainError);
}

TEST_CASE("u-coordinates") {
  CHECK(to_u({Geometry::euclidean, {1, 1, 1}}).u.isZero(0.0));
  std::mt19937_64 rng(22);
  for (Geometry g : {Geometry::euclidean, Geometry::hyperbolic, Geometry::spherical}) {
    for (int trial = 0; trial < 200; ++trial) {
      const double r = g == Geometry::spherical ? uniform(rng, 1e-3, 3.1) : std::exp(uniform(rng, -8, 3.5));
      const double u = u_from_radius(g, r);
      if (g == Geometry::hyperbolic) CHECK(u < 0);
      CHECK(radius_from_u(g, u) == doctest::Approx(r).epsilon(1e-12));
    }
  }
  // Large hyperbolic radii keep their resolution.
  for (double r : {20.0, 35.0}) {
    CHECK(radius_from_u(Geometry::hyperbolic, u_from_radius(Geometry::hyperbolic, r)) ==
          doctest::Approx(r).epsilon(1e-12));
  }
  CHECK_THROWS_AS(radius_from_u(Geometry::hyperbolic, 0.0), DomainError);
  CHECK_THROWS_AS(u_from_radius(Geometry::spherical, 3.2), DomainError);
}

TEST_CASE("Hessian equals the u-derivative of curvature") {
  std::mt19937_64 rng(23);
  for (Geometry g : {Geometry::euclidean, Geometry::hyperbolic, Geometry::spherical}) {
    const auto f = as_geometry(g == Geometry::spherical ? "tetrahedron_spherical" : "torus7_weighted", g);
    for (int trial = 0; trial < 3; ++trial) {
      const auto metric = random_metric(f.mesh, g, rng);
      const auto a = dense(curvature_hessian(f.mesh, metric));
      const auto u0 = to_u(metric);
      const double scale = a.cwiseAbs().maxCoeff();
      for (Eigen::Index j = 0; j < u0.u.size(); ++j) {
        for (Eigen::Index i = 0; i < u0.u.size(); ++i) {
          const double fd = derivative(
              [&](double t) {
                UCoordinates u = u0;
                u.u[j] = t;
                return curvature_state(f.mesh, from_u(u)).curvatures[i];
              },
              u0.u[j], 1e-3);
          CHECK(std::abs(a(i, j) - fd) <= 1e-7 * scale);
        }
      }
    }
  }
}

TEST_CASE("Hessian structure") {
  std::mt19937_64 rng(24);
  for (const char* name : {"tetrahedron", "torus7_weighted", "genus2"}) {
    for (Geometry g : {Geometry::euclidean, Geometry::hyperbolic}) {
      const auto f = as_geometry(name, g);
      const auto metric = random_metric(f.mesh, g, rng);
      const SparseMatrix h = curvature_hessian(f.mesh, metric);
      const auto a = dense(h);
      CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-10);
      const Eigen::VectorXd row_sums = a.rowwise().sum();
      if (g == Geometry::euclidean) {
        CHECK(row_sums.cwiseAbs().maxCoeff() < 1e-10);
        CHECK(diagonal_dominance_verdict(h) == Definiteness::psd_rank_deficient_1);
        // Smallest eigenvalue on the sum-zero hyperplane, from a dense solver.
        const Eigen::Index n = a.rows();
        Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n - 1);
        for (Eigen::Index k = 0; k + 1 < n; ++k) {
          basis(k, k) = 1;
          basis(n - 1, k) = -1;
        }
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n - 1);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.transpose() * a * q);
        CHECK(eig.eigenvalues().minCoeff() > 1e-8);
      } else {
        CHECK(row_sums.minCoeff() > 0);
        CHECK(diagonal_dominance_verdict(h) == Definiteness::positive_definite);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
        CHECK(eig.eigenvalues().minCoeff() > 0);
      }
    }
  }
}

TEST_CASE("diagonal dominance verdicts on small matrices") {
  auto sparse = [](std::initializer_list<std::initializer_list<double>> rows) {
    Eigen::MatrixXd m(rows.size(), rows.size());
    int i = 0;
    for (auto row : rows) {
      int j = 0;
      for (double x : row) m(i, j++) = x;
      ++i;
    }
    return SparseMatrix(m.sparseView());
  };
  CHECK(diagonal_dominance_verdict(sparse({{2, -1}, {-1, 2}})) == Definiteness::positive_definite);
  CHECK(diagonal_dominance_verdict(sparse({{1, -1}, {-1, 1}})) == Definiteness::psd_rank_deficient_1);
  // Reducible: two decoupled blocks have a two-dimensional kernel.
  CHECK(diagonal_dominance_verdict(sparse({{1, -1, 0, 0}, {-1, 1, 0, 0}, {0, 0, 1, -1}, {0, 0, -1, 1}})) ==
        Definiteness::unknown);
  CHECK(diagonal_dominance_verdict(sparse({{1, 2}, {2, 1}})) == Definiteness::unknown);
}

}  // TEST_SUITE
