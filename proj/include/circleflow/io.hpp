#pragma once

// Mesh files (JSON) and flow traces (JSON lines).
//
// Mesh file:
//   {"geometry": "euclidean" | "hyperbolic" | "spherical",
//    "vertices": N,
//    "edges": [{"a": int, "b": int, "weight": real | {"deg": real}}, ...],
//    "faces": [{"v": [i, j, k], "e": [e_jk, e_ki, e_ij]}, ...],
//    "radii": [N reals]      (optional),
//    "targets": [N reals]    (optional)}
//
// Trace file: one object per sample,
//   {"t", "radii", "K", "M", "m", "h", "err"}
// followed by a terminal object carrying "termination", "geometry",
// "targets" and, for converged runs, the convergence report fields.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circleflow/curvature.hpp"
#include "circleflow/flow.hpp"
#include "circleflow/mesh.hpp"

namespace circleflow {

struct MeshFile {
  WeightedTriangulation mesh;
  Geometry geometry = Geometry::euclidean;
  /// Radii from the file, or the default (1 for euclidean/hyperbolic, pi/8
  /// for spherical) when absent.
  PackingMetric metric;
  bool radii_given = false;
  /// Targets from the file, or the geometry default when absent.
  std::vector<double> targets;
  bool targets_given = false;
};

/// Parses and validates. Throws ParseError (malformed document, with the
/// line or field) or ValidationError (structural violations).
MeshFile parse_mesh_text(std::string_view text, const ValidationOptions& options = {});
MeshFile parse_mesh(const std::filesystem::path& path, const ValidationOptions& options = {});

/// Pretty-printed mesh document; radii and targets are written only when
/// they were given.
std::string serialize_mesh(const MeshFile& file);

PackingMetric default_metric(const WeightedTriangulation& mesh, Geometry g);

void write_trace(std::ostream& out, const FlowResult& result);

struct ParsedTrace {
  FlowTrace trace;
  std::optional<ConvergenceReport> report;
};

ParsedTrace read_trace(std::istream& in);

}  // namespace circleflow
