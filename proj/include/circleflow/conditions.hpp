#pragma once

// Existence conditions for constant-curvature circle packings: the vertex
// subset inequality (euclidean background) and the short-loop conditions
// (hyperbolic background), plus the degeneration bound they are built on.

#include <optional>
#include <string_view>
#include <vector>

#include "circleflow/curvature.hpp"
#include "circleflow/mesh.hpp"

namespace circleflow {

enum class Verdict { holds, fails, near_tie, skipped, undetermined };

std::string_view to_string(Verdict v);

/// Limit of sum_{i in I} K_i as the radii in I shrink to zero:
///   -sum_{(e,v) in Lk(I)} (pi - weight(e)) + 2*pi*chi(F_I).
double subset_bound(const WeightedTriangulation& mesh, const VertexSubset& subset);

struct SubsetMargin {
  std::vector<int> subset;
  double bound = 0.0;
  /// sum of target curvatures over the subset minus the bound; must be > 0.
  double margin = 0.0;
};

struct SubsetConditionOptions {
  /// Exhaustive scan over all proper subsets up to this many vertices.
  int subset_cap = 20;
  /// Target curvatures; empty means K_av = 2*pi*chi/N at every vertex.
  std::vector<double> targets;
  /// Margins within this fraction of the compared magnitudes are near-ties.
  double relative_slack = 1e-12;
  std::size_t max_near_ties = 16;
};

struct SubsetConditionResult {
  Verdict verdict = Verdict::holds;
  bool exhaustive = true;
  /// Lexicographically least violating subset.
  std::optional<SubsetMargin> witness;
  std::vector<SubsetMargin> near_ties;
  /// Smallest margin over all scanned subsets.
  std::optional<SubsetMargin> tightest;
  /// Partial mode only: null-homotopic 3-loops with weight sum >= pi not
  /// bounding a face, and 4-loops with weight sum >= 2*pi not bounding two
  /// adjacent faces.
  std::vector<ShortLoop> loop_flags;
};

SubsetConditionResult check_subset_condition(const WeightedTriangulation& mesh,
                                     const SubsetConditionOptions& options = {});

struct LoopConditionResult {
  Verdict verdict = Verdict::holds;
  std::optional<ShortLoop> witness;
  /// Loops reaching the threshold whose homotopy class was not decided.
  std::vector<ShortLoop> undetermined;
};

struct LoopConditionsResult {
  LoopConditionResult three_loops;
  LoopConditionResult four_loops;
};

LoopConditionsResult check_loop_conditions(const WeightedTriangulation& mesh);

struct ProbeRow {
  double factor = 0.0;
  double curvature_sum = 0.0;  // sum_{i in I} K_i with radii in I scaled
  double bound = 0.0;
  double gap = 0.0;  // curvature_sum - bound
};

/// Scales the radii of `subset` by each factor and compares the curvature
/// sum over the subset with subset_bound.
std::vector<ProbeRow> degeneration_probe(const WeightedTriangulation& mesh,
                                         const PackingMetric& metric, const VertexSubset& subset,
                                         const std::vector<double>& factors);

}  // namespace circleflow
