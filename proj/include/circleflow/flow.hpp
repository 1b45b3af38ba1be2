#pragma once

// Combinatorial Ricci flow and its Newton fast path.
//
// All geometries are integrated in u-coordinates, where every variant of the
// flow reads du_i/dt = -(K_i - target_i). In the euclidean case the update is
// projected onto sum(du) = 0, which keeps the product of radii fixed.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "circleflow/curvature.hpp"
#include "circleflow/errors.hpp"
#include "circleflow/mesh.hpp"

namespace circleflow {

enum class FlowMode { explicit_euler, newton };
enum class Termination { converged, max_steps, degenerated, stopped };

std::string_view to_string(FlowMode m);
std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view name);

struct FlowConfig {
  /// Empty selects the geometry default (see default_targets).
  std::vector<double> target_curvatures;
  double step_init = 0.05;
  double step_max = 0.5;
  /// Stop once max |K_i - target_i| falls to this value.
  double tol_curvature = 1e-8;
  std::size_t max_steps = 1'000'000;
  FlowMode mode = FlowMode::explicit_euler;

  /// Step-doubling error budget: rtol * max|K - target| + atol, measured in K.
  double step_rtol = 1e-2;
  double step_atol = 1e-13;
  /// Below this step size the integrator gives up (degenerated).
  double min_step = 1e-12;
  /// false disables error control; steps are then only domain-guarded.
  bool adaptive = true;
  /// Keep every n-th accepted step in the trace (first and last always kept).
  std::size_t record_every = 1;
};

/// Flow defaults: tolerance 1e-8, up to 1e6 steps.
FlowConfig default_flow_config();
/// Newton defaults: tolerance 1e-10, up to 100 iterations.
FlowConfig default_newton_config();

/// Euclidean: K_av = 2*pi*chi/N everywhere. Hyperbolic and spherical: zero.
std::vector<double> default_targets(const WeightedTriangulation& mesh, Geometry g);

/// Targets of the run: the configured ones, or the geometry default. Throws
/// DomainError on a size mismatch or, in the euclidean case, when the targets
/// do not sum to 2*pi*chi.
std::vector<double> resolve_targets(const WeightedTriangulation& mesh, Geometry g,
                                    const FlowConfig& config);

struct FlowSample {
  double t = 0.0;
  std::vector<double> radii;
  std::vector<double> curvatures;
  double max_curvature = 0.0;  // M(t)
  double min_curvature = 0.0;  // m(t)
  double step = 0.0;           // step that produced this sample
  /// Step-doubling estimate of the local error in K accumulated since the
  /// previous sample; zero when error control is off.
  double error_estimate = 0.0;
};

struct FlowTrace {
  Geometry geometry = Geometry::euclidean;
  std::vector<double> targets;
  std::vector<FlowSample> samples;
  Termination termination = Termination::max_steps;
};

struct ConvergenceReport {
  std::vector<double> limit_radii;
  std::vector<double> limit_curvatures;
  double rate_c1 = 0.0;
  double rate_c2 = 0.0;
  /// Final max |K_i - target_i|.
  double residual = 0.0;
  /// True when the tail fit gave a positive rate.
  bool exponential = false;
};

struct FlowResult {
  FlowTrace trace;
  /// Present only when termination == converged.
  std::optional<ConvergenceReport> report;
};

/// max_i |K_i - target_i|
double sup_deviation(const std::vector<double>& curvatures, const std::vector<double>& targets);

/// sum_i (K_i - target_i)^2
double curvature_dispersion(const std::vector<double>& curvatures, const std::vector<double>& targets);

/// du/dt = -(K - target); euclidean: additionally projected onto sum = 0.
Eigen::VectorXd ricci_rhs(const WeightedTriangulation& mesh, const PackingMetric& metric,
                          const std::vector<double>& targets);

struct StepOutcome {
  UCoordinates u;  // new point if accepted, otherwise the input point
  bool accepted = false;
  double error_estimate = 0.0;
  double next_step = 0.0;
  std::vector<double> curvatures;  // at u
};

/// One explicit Euler step of size h. Rejected (and h halved) when the
/// candidate leaves the geometry's domain or, with error control on, when the
/// full-step / two-half-steps discrepancy in K exceeds the budget.
StepOutcome euler_step(const WeightedTriangulation& mesh, const UCoordinates& u,
                       const FlowConfig& config, double h);

/// Integrates until the curvature tolerance, max_steps or degeneration.
/// Spherical runs never report `converged`; reaching the tolerance there
/// ends the run as `stopped`.
FlowResult run_flow(const WeightedTriangulation& mesh, const PackingMetric& initial,
                    const FlowConfig& config);

struct NewtonResult {
  PackingMetric metric;
  int iterations = 0;
  double residual = 0.0;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, PackingMetric best, double residual, int iterations)
      : Error(what), best_(std::move(best)), residual_(residual), iterations_(iterations) {}

  const PackingMetric& best() const { return best_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  PackingMetric best_;
  double residual_;
  int iterations_;
};

/// Damped Newton iteration on the convex potential (euclidean or hyperbolic).
/// Throws NonConvergence carrying the best iterate.
NewtonResult newton_solve(const WeightedTriangulation& mesh, const PackingMetric& initial,
                          const FlowConfig& config);

struct QuadratureOptions {
  /// Gauss-Legendre points per panel: 7, 10, 15, 20, 25 or 30.
  int order = 15;
  int panels = 4;
};

/// Line integral of sum_i (K_i - target_i) du_i along the segment base -> u.
double potential_value(const WeightedTriangulation& mesh, const UCoordinates& u,
                       const UCoordinates& base, const std::vector<double>& targets,
                       const QuadratureOptions& options = {});

struct RateFit {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Least-squares fit of log max|K - target| = log c1 - c2 t over the second
/// half of the samples. Needs a converged trace with at least 10 tail samples.
RateFit estimate_exponential_rate(const FlowTrace& trace);

struct MaxPrincipleVerdict {
  bool applicable = true;
  bool pass = true;
  std::optional<std::size_t> violating_sample;
  std::string detail;
};

/// Monotonicity of the extremes of K - target along the trace: euclidean
/// max non-increasing and min non-decreasing; hyperbolic the same for
/// max(M, 0) and min(m, 0). Each step may deviate by its recorded error
/// estimate. Not applicable to spherical traces.
MaxPrincipleVerdict check_max_principle(const FlowTrace& trace, Geometry g);

}  // namespace circleflow
