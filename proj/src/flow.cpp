#include "circleflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SparseCholesky>

namespace circleflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Evaluation {
  PackingMetric metric;
  std::vector<double> curvatures;
};

// Curvature at u, or nullopt when u is outside the geometry's domain.
std::optional<Evaluation> evaluate(const WeightedTriangulation& mesh, const UCoordinates& u) {
  try {
    Evaluation out{from_u(u), {}};
    out.curvatures = curvature_state(mesh, out.metric).curvatures;
    return out;
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const DegenerateTriangle&) {
    return std::nullopt;
  }
}

Eigen::VectorXd rhs_from(const std::vector<double>& curvatures, const std::vector<double>& targets,
                         Geometry g) {
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(curvatures.size()));
  for (std::size_t i = 0; i < curvatures.size(); ++i) {
    rhs[static_cast<Eigen::Index>(i)] = -(curvatures[i] - targets[i]);
  }
  if (g == Geometry::euclidean) rhs.array() -= rhs.mean();
  return rhs;
}

double sup_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a[i] - b[i]));
  return out;
}

UCoordinates advance(const UCoordinates& u, const Eigen::VectorXd& rhs, double h) {
  return {u.geometry, u.u + h * rhs};
}

// Euler step from a point whose curvature is already known.
StepOutcome step_from(const WeightedTriangulation& mesh, const UCoordinates& u,
                      const std::vector<double>& curvatures, const std::vector<double>& targets,
                      const FlowConfig& config, double h) {
  StepOutcome rejected{u, false, 0.0, 0.5 * h, curvatures};
  const Eigen::VectorXd rhs = rhs_from(curvatures, targets, u.geometry);

  UCoordinates full = advance(u, rhs, h);
  const auto full_eval = evaluate(mesh, full);
  if (!full_eval) return rejected;

  double error = 0.0;
  double next = h;
  if (config.adaptive) {
    const UCoordinates half = advance(u, rhs, 0.5 * h);
    const auto half_eval = evaluate(mesh, half);
    if (!half_eval) return rejected;
    const UCoordinates twice =
        advance(half, rhs_from(half_eval->curvatures, targets, u.geometry), 0.5 * h);
    const auto twice_eval = evaluate(mesh, twice);
    if (!twice_eval) return rejected;

    error = sup_difference(full_eval->curvatures, twice_eval->curvatures);
    const double budget = config.step_rtol * sup_deviation(curvatures, targets) + config.step_atol;
    if (error > budget) {
      rejected.error_estimate = error;
      return rejected;
    }
    // Local error of Euler is O(h^2).
    const double factor = error > 0.0 ? 0.9 * std::sqrt(budget / error) : 2.0;
    next = h * std::clamp(factor, 0.2, 2.0);
  }
  next = std::min(next, config.step_max);
  return {std::move(full), true, error, next, full_eval->curvatures};
}

FlowSample make_sample(double t, const PackingMetric& metric, const std::vector<double>& curvatures,
                       double step, double error) {
  FlowSample s;
  s.t = t;
  s.radii = metric.radii;
  s.curvatures = curvatures;
  s.max_curvature = *std::max_element(curvatures.begin(), curvatures.end());
  s.min_curvature = *std::min_element(curvatures.begin(), curvatures.end());
  s.step = step;
  s.error_estimate = error;
  return s;
}

}  // namespace

std::string_view to_string(FlowMode m) {
  return m == FlowMode::newton ? "newton" : "explicit_euler";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_steps: return "max_steps";
    case Termination::degenerated: return "degenerated";
    case Termination::stopped: return "stopped";
  }
  return "max_steps";
}

Termination termination_from_string(std::string_view name) {
  if (name == "converged") return Termination::converged;
  if (name == "max_steps") return Termination::max_steps;
  if (name == "degenerated") return Termination::degenerated;
  if (name == "stopped") return Termination::stopped;
  throw DomainError("unknown termination '" + std::string(name) + "'");
}

FlowConfig default_flow_config() { return FlowConfig{}; }

FlowConfig default_newton_config() {
  FlowConfig config;
  config.mode = FlowMode::newton;
  config.tol_curvature = 1e-10;
  config.max_steps = 100;
  return config;
}

std::vector<double> default_targets(const WeightedTriangulation& mesh, Geometry g) {
  const double value =
      g == Geometry::euclidean ? kTwoPi * euler_characteristic(mesh) / mesh.vertex_count() : 0.0;
  return std::vector<double>(mesh.vertex_count(), value);
}

std::vector<double> resolve_targets(const WeightedTriangulation& mesh, Geometry g,
                                    const FlowConfig& config) {
  if (config.target_curvatures.empty()) return default_targets(mesh, g);
  const auto& targets = config.target_curvatures;
  if (static_cast<int>(targets.size()) != mesh.vertex_count()) {
    throw DomainError("expected one target curvature per vertex");
  }
  if (g == Geometry::euclidean) {
    double sum = 0.0;
    for (double k : targets) sum += k;
    const double expected = kTwoPi * euler_characteristic(mesh);
    if (std::abs(sum - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw DomainError("euclidean target curvatures must sum to 2*pi*chi");
    }
  }
  return targets;
}

double sup_deviation(const std::vector<double>& curvatures, const std::vector<double>& targets) {
  return sup_difference(curvatures, targets);
}

double curvature_dispersion(const std::vector<double>& curvatures, const std::vector<double>& targets) {
  double out = 0.0;
  for (std::size_t i = 0; i < curvatures.size(); ++i) {
    const double d = curvatures[i] - targets[i];
    out += d * d;
  }
  return out;
}

Eigen::VectorXd ricci_rhs(const WeightedTriangulation& mesh, const PackingMetric& metric,
                          const std::vector<double>& targets) {
  return rhs_from(curvature_state(mesh, metric).curvatures, targets, metric.geometry);
}

StepOutcome euler_step(const WeightedTriangulation& mesh, const UCoordinates& u,
                       const FlowConfig& config, double h) {
  if (!(h > 0.0) || h > config.step_max) throw DomainError("step size must lie in (0, step_max]");
  const auto targets = resolve_targets(mesh, u.geometry, config);
  const auto here = evaluate(mesh, u);
  if (!here) throw DomainError("starting point is outside the domain");
  return step_from(mesh, u, here->curvatures, targets, config, h);
}

FlowResult run_flow(const WeightedTriangulation& mesh, const PackingMetric& initial,
                    const FlowConfig& config) {
  check_metric(mesh, initial);
  FlowResult result;
  FlowTrace& trace = result.trace;
  trace.geometry = initial.geometry;
  trace.targets = resolve_targets(mesh, initial.geometry, config);

  UCoordinates u = to_u(initial);
  PackingMetric metric = initial;
  std::vector<double> curvatures = curvature_state(mesh, metric).curvatures;
  trace.samples.push_back(make_sample(0.0, metric, curvatures, 0.0, 0.0));

  double t = 0.0;
  double h = std::min(config.step_init, config.step_max);
  double pending_error = 0.0;
  std::size_t accepted = 0;
  bool recorded_last = true;
  trace.termination = Termination::max_steps;

  while (true) {
    if (sup_deviation(curvatures, trace.targets) <= config.tol_curvature) {
      trace.termination = initial.geometry == Geometry::spherical ? Termination::stopped
                                                                   : Termination::converged;
      break;
    }
    if (accepted >= config.max_steps) break;

    StepOutcome step = step_from(mesh, u, curvatures, trace.targets, config, h);
    if (!step.accepted) {
      h = step.next_step;
      if (h < config.min_step) {
        trace.termination = Termination::degenerated;
        break;
      }
      continue;
    }
    ++accepted;
    t += h;
    u = std::move(step.u);
    curvatures = std::move(step.curvatures);
    metric = from_u(u);
    pending_error += step.error_estimate;
    recorded_last = false;
    if (accepted % std::max<std::size_t>(1, config.record_every) == 0) {
      trace.samples.push_back(make_sample(t, metric, curvatures, h, pending_error));
      pending_error = 0.0;
      recorded_last = true;
    }
    h = step.next_step;
  }
  if (!recorded_last) trace.samples.push_back(make_sample(t, metric, curvatures, h, pending_error));

  if (trace.termination == Termination::converged) {
    ConvergenceReport report;
    report.limit_radii = metric.radii;
    report.limit_curvatures = curvatures;
    report.residual = sup_deviation(curvatures, trace.targets);
    report.rate_c1 = std::numeric_limits<double>::quiet_NaN();
    report.rate_c2 = std::numeric_limits<double>::quiet_NaN();
    try {
      const RateFit fit = estimate_exponential_rate(trace);
      report.rate_c1 = fit.c1;
      report.rate_c2 = fit.c2;
      report.exponential = fit.c2 > 0.0;
    } catch (const InsufficientData&) {
    }
    result.report = std::move(report);
  }
  return result;
}

NewtonResult newton_solve(const WeightedTriangulation& mesh, const PackingMetric& initial,
                          const FlowConfig& config) {
  if (initial.geometry == Geometry::spherical) {
    throw DomainError("newton_solve supports euclidean and hyperbolic geometry only");
  }
  check_metric(mesh, initial);
  const auto targets = resolve_targets(mesh, initial.geometry, config);
  const bool euclidean = initial.geometry == Geometry::euclidean;
  const Eigen::Index n = mesh.vertex_count();
  const int max_iterations = static_cast<int>(config.max_steps);

  UCoordinates u = to_u(initial);
  PackingMetric metric = initial;
  std::vector<double> curvatures = curvature_state(mesh, metric).curvatures;
  double residual = sup_deviation(curvatures, targets);

  for (int iteration = 0; iteration <= max_iterations; ++iteration) {
    if (residual <= config.tol_curvature) return {metric, iteration, residual};
    if (iteration == max_iterations) break;

    Eigen::VectorXd gradient(n);
    for (Eigen::Index i = 0; i < n; ++i) gradient[i] = curvatures[i] - targets[i];

    const SparseMatrix hessian = curvature_hessian(mesh, metric);
    Eigen::VectorXd delta(n);
    Eigen::SimplicialLDLT<SparseMatrix> solver;
    if (euclidean) {
      // The kernel is spanned by (1, ..., 1): pin the last vertex, then
      // recentre the step on sum(delta) = 0.
      const SparseMatrix reduced = hessian.topLeftCorner(n - 1, n - 1);
      solver.compute(reduced);
      if (solver.info() != Eigen::Success) break;
      delta.head(n - 1) = solver.solve(-gradient.head(n - 1));
      delta[n - 1] = 0.0;
      delta.array() -= delta.mean();
    } else {
      solver.compute(hessian);
      if (solver.info() != Eigen::Success) break;
      delta = solver.solve(-gradient);
    }
    if (solver.info() != Eigen::Success || !delta.allFinite()) break;

    bool moved = false;
    for (double alpha = 1.0; alpha >= 1e-12; alpha *= 0.5) {
      const UCoordinates trial = advance(u, delta, alpha);
      const auto eval = evaluate(mesh, trial);
      if (!eval) continue;
      const double trial_residual = sup_deviation(eval->curvatures, targets);
      if (trial_residual < residual) {
        u = trial;
        metric = eval->metric;
        curvatures = eval->curvatures;
        residual = trial_residual;
        moved = true;
        break;
      }
    }
    if (!moved) {
      throw NonConvergence("newton line search stalled", metric, residual, iteration + 1);
    }
  }
  throw NonConvergence("newton iteration did not reach the curvature tolerance", metric, residual,
                       max_iterations);
}

RateFit estimate_exponential_rate(const FlowTrace& trace) {
  if (trace.termination != Termination::converged) {
    throw InsufficientData("rate fit needs a converged trace");
  }
  const std::size_t total = trace.samples.size();
  std::vector<double> ts, ys;
  for (std::size_t i = total / 2; i < total; ++i) {
    const double dev = sup_deviation(trace.samples[i].curvatures, trace.targets);
    if (dev > 0.0 && std::isfinite(dev)) {
      ts.push_back(trace.samples[i].t);
      ys.push_back(std::log(dev));
    }
  }
  if (ts.size() < 10) throw InsufficientData("rate fit needs at least 10 tail samples");

  const double count = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    my += ys[i];
  }
  mt /= count;
  my /= count;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
  }
  if (!(stt > 0.0)) throw InsufficientData("rate fit needs distinct sample times");
  const double slope = sty / stt;
  return {std::exp(my - slope * mt), -slope};
}

MaxPrincipleVerdict check_max_principle(const FlowTrace& trace, Geometry g) {
  MaxPrincipleVerdict verdict;
  if (g == Geometry::spherical) {
    verdict.applicable = false;
    verdict.detail = "no maximum principle in spherical geometry";
    return verdict;
  }
  const bool hyperbolic = g == Geometry::hyperbolic;
  auto extremes = [&](const FlowSample& s) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.curvatures.size(); ++i) {
      const double d = s.curvatures[i] - trace.targets[i];
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    if (hyperbolic) {
      hi = std::max(hi, 0.0);
      lo = std::min(lo, 0.0);
    }
    return std::pair{hi, lo};
  };

  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const auto [prev_hi, prev_lo] = extremes(trace.samples[i - 1]);
    const auto [hi, lo] = extremes(trace.samples[i]);
    const double slack =
        trace.samples[i].error_estimate + 1e-12 * (1.0 + std::max(std::abs(hi), std::abs(lo)));
    if (hi > prev_hi + slack || lo < prev_lo - slack) {
      verdict.pass = false;
      verdict.violating_sample = i;
      verdict.detail = "extreme curvature moved outward at sample " + std::to_string(i) +
                       " (max " + std::to_string(prev_hi) + " -> " + std::to_string(hi) +
                       ", min " + std::to_string(prev_lo) + " -> " + std::to_string(lo) + ")";
      return verdict;
    }
  }
  return verdict;
}

}  // namespace circleflow
