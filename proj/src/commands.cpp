#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "circleflow/commands.hpp"
#include "circleflow/conditions.hpp"
#include "circleflow/errors.hpp"
#include "circleflow/flow.hpp"
#include "circleflow/io.hpp"
#include "circleflow/layout.hpp"

namespace circleflow {

namespace {

using nlohmann::json;

std::optional<MeshFile> load(const std::filesystem::path& path, const ValidationOptions& validation,
                             std::ostream& err, int& code) {
  try {
    return parse_mesh(path, validation);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    code = exit_code::parse;
  } catch (const ValidationError& e) {
    err << "validation failed: " << path.string() << '\n';
    for (const auto& v : e.violations()) err << "  " << v << '\n';
    code = exit_code::validation;
  }
  return std::nullopt;
}

std::string join(const std::vector<int>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s + "}";
}

json margin_json(const SubsetMargin& m) {
  return {{"subset", m.subset}, {"bound", m.bound}, {"margin", m.margin}};
}

json loop_json(const ShortLoop& loop) {
  return {{"vertices", loop.vertices},
          {"edges", loop.edges},
          {"weight_sum", loop.weight_sum},
          {"embedded", loop.embedded},
          {"homotopy", std::string(to_string(loop.homotopy))}};
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::holds: return exit_code::ok;
    case Verdict::fails: return exit_code::condition_fails;
    default: return exit_code::undecided;
  }
}

// Worse of two exit codes: a failure outranks an undecided check.
int combine(int a, int b) {
  if (a == exit_code::condition_fails || b == exit_code::condition_fails) return exit_code::condition_fails;
  return std::max(a, b);
}

std::vector<double> targets_for(const MeshFile& file) {
  return file.targets_given ? file.targets : std::vector<double>{};
}

// Most negative margin (target sum minus subset bound) over singletons and
// the set of vertices whose radius collapsed relative to the largest one.
void degeneration_diagnostic(const MeshFile& file, const std::vector<double>& radii,
                             const std::vector<double>& targets, std::ostream& out) {
  const auto& mesh = file.mesh;
  const int n = mesh.vertex_count();
  std::optional<SubsetMargin> worst;
  auto consider = [&](std::vector<int> members) {
    if (members.empty() || static_cast<int>(members.size()) >= n) return;
    const VertexSubset subset(members, n);
    double lhs = 0.0;
    for (int i : subset.members()) lhs += targets[i];
    const double bound = subset_bound(mesh, subset);
    if (!worst || lhs - bound < worst->margin) worst = SubsetMargin{subset.members(), bound, lhs - bound};
  };
  for (int i = 0; i < n; ++i) consider({i});
  const double largest = *std::max_element(radii.begin(), radii.end());
  std::vector<int> shrinking;
  for (int i = 0; i < n; ++i) {
    if (radii[i] < 1e-3 * largest) shrinking.push_back(i);
  }
  consider(shrinking);
  out << "last radii:";
  for (double r : radii) out << ' ' << r;
  out << '\n';
  if (worst) {
    out << "diagnostic (heuristic): most negative subset margin " << worst->margin << " at "
        << join(worst->subset) << " (bound " << worst->bound << ")\n";
  }
}

}  // namespace

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err) {
  int code = exit_code::ok;
  const auto file = load(options.mesh, {.strict = !options.relaxed}, err, code);
  if (!file) return code;
  const auto& mesh = file->mesh;
  const int chi = euler_characteristic(mesh);

  json report{{"mesh", options.mesh.string()},
              {"geometry", std::string(to_string(file->geometry))},
              {"vertices", mesh.vertex_count()},
              {"edges", mesh.edge_count()},
              {"faces", mesh.face_count()},
              {"euler_characteristic", chi},
              {"validation", "ok"}};
  std::ostringstream text;
  text << "mesh: " << options.mesh.string() << " (" << to_string(file->geometry) << ")\n"
       << "validation: ok, V=" << mesh.vertex_count() << " E=" << mesh.edge_count()
       << " F=" << mesh.face_count() << " chi=" << chi << '\n';

  switch (file->geometry) {
    case Geometry::euclidean: {
      SubsetConditionOptions cond;
      cond.subset_cap = options.subset_cap;
      cond.targets = targets_for(*file);
      const auto result = check_subset_condition(mesh, cond);
      code = verdict_code(result.verdict);
      json c{{"verdict", std::string(to_string(result.verdict))}, {"exhaustive", result.exhaustive}};
      text << "subset condition: " << to_string(result.verdict)
           << (result.exhaustive ? " (exhaustive scan)" : " (scan skipped)") << '\n';
      if (result.witness) {
        c["witness"] = margin_json(*result.witness);
        text << "  witness I = " << join(result.witness->subset) << ", bound "
             << result.witness->bound << ", margin " << result.witness->margin << '\n';
      }
      if (result.tightest) {
        c["tightest"] = margin_json(*result.tightest);
        text << "  tightest I = " << join(result.tightest->subset) << ", margin "
             << result.tightest->margin << '\n';
      }
      c["near_ties"] = json::array();
      for (const auto& m : result.near_ties) {
        c["near_ties"].push_back(margin_json(m));
        text << "  near tie I = " << join(m.subset) << ", margin " << m.margin << '\n';
      }
      c["loop_flags"] = json::array();
      for (const auto& loop : result.loop_flags) {
        c["loop_flags"].push_back(loop_json(loop));
        text << "  flagged loop " << join(loop.vertices) << ", weight sum " << loop.weight_sum << '\n';
      }
      report["subset_condition"] = c;
      break;
    }
    case Geometry::hyperbolic: {
      if (chi >= 0) {
        code = exit_code::condition_fails;
        text << "negative euler characteristic: fails (chi = " << chi << ")\n";
        report["negative_euler_characteristic"] = "fails";
      }
      const auto result = check_loop_conditions(mesh);
      json c;
      for (const auto& [name, part] : {std::pair{"three_loops", &result.three_loops},
                                       std::pair{"four_loops", &result.four_loops}}) {
        code = combine(code, verdict_code(part->verdict));
        json p{{"verdict", std::string(to_string(part->verdict))}};
        text << name << ": " << to_string(part->verdict) << '\n';
        if (part->witness) {
          p["witness"] = loop_json(*part->witness);
          text << "  witness loop " << join(part->witness->vertices) << ", weight sum "
               << part->witness->weight_sum << '\n';
        }
        p["undetermined"] = json::array();
        for (const auto& loop : part->undetermined) {
          p["undetermined"].push_back(loop_json(loop));
          text << "  undetermined loop " << join(loop.vertices) << ", weight sum " << loop.weight_sum << '\n';
        }
        c[name] = p;
      }
      report["loop_conditions"] = c;
      break;
    }
    case Geometry::spherical:
      text << "no existence conditions are known for spherical packings; nothing checked\n";
      report["note"] = "no existence conditions for spherical geometry";
      break;
  }
  report["exit_code"] = code;
  if (options.json) {
    out << report.dump(2) << '\n';
  } else {
    out << text.str();
  }
  return code;
}

int cmd_flow(const FlowOptions& options, std::ostream& out, std::ostream& err) {
  int code = exit_code::ok;
  const auto file = load(options.mesh, {}, err, code);
  if (!file) return code;
  const bool newton = options.mode == "newton";
  if (!newton && options.mode != "euler") {
    err << "unknown mode '" << options.mode << "' (expected euler or newton)\n";
    return exit_code::error;
  }
  FlowConfig config = newton ? default_newton_config() : default_flow_config();
  config.mode = newton ? FlowMode::newton : FlowMode::explicit_euler;
  if (options.tol) config.tol_curvature = *options.tol;
  if (options.max_steps) config.max_steps = *options.max_steps;
  config.target_curvatures = targets_for(*file);
  const Geometry g = file->geometry;

  std::vector<double> targets;
  try {
    targets = resolve_targets(file->mesh, g, config);
  } catch (const DomainError& e) {
    err << "invalid targets: " << e.what() << '\n';
    return exit_code::validation;
  }

  FlowResult result;
  out << std::setprecision(12);
  if (newton) {
    if (g == Geometry::spherical) {
      err << "newton mode supports euclidean and hyperbolic geometry only\n";
      return exit_code::error;
    }
    NewtonResult solved;
    try {
      solved = newton_solve(file->mesh, file->metric, config);
    } catch (const NonConvergence& e) {
      out << "newton: " << e.what() << " after " << e.iterations() << " iterations, sup-norm "
          << e.residual() << '\n';
      degeneration_diagnostic(*file, e.best().radii, targets, out);
      return exit_code::non_convergence;
    }
    // Newton traces hold the start and the solution; t counts iterations.
    const auto start = curvature_state(file->mesh, file->metric).curvatures;
    const auto end = curvature_state(file->mesh, solved.metric).curvatures;
    auto sample = [&](double t, const std::vector<double>& radii, const std::vector<double>& k) {
      FlowSample s{t, radii, k, 0.0, 0.0, 0.0, 0.0};
      s.max_curvature = *std::max_element(k.begin(), k.end());
      s.min_curvature = *std::min_element(k.begin(), k.end());
      return s;
    };
    result.trace.geometry = g;
    result.trace.targets = targets;
    result.trace.samples.push_back(sample(0.0, file->metric.radii, start));
    if (solved.iterations > 0) {
      result.trace.samples.push_back(sample(solved.iterations, solved.metric.radii, end));
    }
    result.trace.termination = Termination::converged;
    result.report = ConvergenceReport{solved.metric.radii, end, std::nan(""), std::nan(""),
                                      solved.residual, false};
    out << "newton: converged in " << solved.iterations << " iterations\n"
        << "final sup-norm |K - target|: " << solved.residual << '\n';
  } else {
    result = run_flow(file->mesh, file->metric, config);
    const auto& trace = result.trace;
    const auto& last = trace.samples.back();
    out << "termination: " << to_string(trace.termination) << " after " << trace.samples.size() - 1
        << " recorded steps, t = " << last.t << '\n'
        << "final sup-norm |K - target|: " << sup_deviation(last.curvatures, trace.targets) << '\n';
    if (result.report && std::isfinite(result.report->rate_c2)) {
      out << "rate: c1 = " << result.report->rate_c1 << ", c2 = " << result.report->rate_c2 << '\n';
    } else {
      out << "rate: not available\n";
    }
    const auto mp = check_max_principle(trace, g);
    out << "max principle: " << (!mp.applicable ? "not applicable" : mp.pass ? "pass" : "fail");
    if (!mp.detail.empty()) out << " (" << mp.detail << ')';
    out << '\n';

    if (g == Geometry::spherical) {
      out << "stopped: spherical mode, no convergence guarantee\n";
      if (trace.termination == Termination::degenerated) {
        out << "constraint hit: step size collapsed at the domain boundary\n";
        degeneration_diagnostic(*file, last.radii, trace.targets, out);
        code = exit_code::non_convergence;
      }
    } else if (trace.termination == Termination::converged) {
      if (result.report && result.report->exponential) out << "converged exponentially\n";
      else out << "converged\n";
    } else {
      degeneration_diagnostic(*file, last.radii, trace.targets, out);
      code = exit_code::non_convergence;
    }
  }

  if (options.trace_out) {
    std::ofstream trace_file(*options.trace_out);
    if (!trace_file) {
      err << "cannot write " << options.trace_out->string() << '\n';
      return exit_code::error;
    }
    trace_file << std::setprecision(17);
    write_trace(trace_file, result);
  }
  return code;
}

int cmd_layout(const LayoutOptions& options, std::ostream& out, std::ostream& err) {
  int code = exit_code::ok;
  const auto file = load(options.mesh, {}, err, code);
  if (!file) return code;
  PackingMetric metric = file->metric;
  try {
    if (options.trace) {
      std::ifstream in(*options.trace);
      if (!in) throw ParseError("cannot open " + options.trace->string());
      const auto parsed = read_trace(in);
      if (parsed.trace.samples.empty()) throw ParseError("trace has no samples");
      if (parsed.trace.geometry != file->geometry) throw ParseError("trace geometry differs from mesh");
      metric.radii = parsed.trace.samples.back().radii;
    } else if (options.solve && file->geometry != Geometry::spherical) {
      FlowConfig config = default_newton_config();
      config.target_curvatures = targets_for(*file);
      metric = newton_solve(file->mesh, metric, config).metric;
    }
    const LayoutPlan plan = develop(file->mesh, metric);
    std::ofstream svg(options.svg_out);
    if (!svg) {
      err << "cannot write " << options.svg_out.string() << '\n';
      return exit_code::error;
    }
    svg << render_svg(plan, file->mesh, metric, {.size = options.size});
    out << "layout: " << plan.faces.size() << " faces placed from seed face " << plan.seed_face << ", "
        << plan.cut_edges.size() << " cut edges, written to " << options.svg_out.string() << '\n';
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_code::parse;
  } catch (const NonConvergence& e) {
    err << "newton: " << e.what() << '\n';
    return exit_code::non_convergence;
  } catch (const UnsupportedLayout& e) {
    err << "unsupported layout: " << e.what() << '\n';
    return exit_code::error;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::error;
  }
  return code;
}

}  // namespace circleflow
