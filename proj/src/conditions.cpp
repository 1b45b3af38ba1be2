#include "circleflow/conditions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "circleflow/flow.hpp"
#include "parallel.hpp"

namespace circleflow {

namespace {

constexpr double kPi = std::numbers::pi;

using Mask = std::uint32_t;

std::vector<int> members_of(Mask mask) {
  std::vector<int> out;
  for (int v = 0; mask != 0; ++v, mask >>= 1) {
    if (mask & 1u) out.push_back(v);
  }
  return out;
}

// Lexicographic order on the sorted member lists of two distinct masks.
bool lex_less(Mask a, Mask b) {
  const Mask diff = a ^ b;
  const int d = std::countr_zero(diff);
  if ((a >> d) & 1u) return (b >> d) != 0;
  return (a >> d) == 0;
}

struct SubsetTables {
  std::vector<Mask> edge_masks;
  std::vector<Mask> face_masks;
  struct LinkSlot {
    Mask vertex;
    Mask opposite;
    double cost;  // pi - weight
  };
  std::vector<LinkSlot> slots;

  explicit SubsetTables(const WeightedTriangulation& mesh) {
    for (const Edge& e : mesh.edges()) edge_masks.push_back((Mask{1} << e.a) | (Mask{1} << e.b));
    for (int f = 0; f < mesh.face_count(); ++f) {
      const Face& face = mesh.face(f);
      face_masks.push_back((Mask{1} << face.v[0]) | (Mask{1} << face.v[1]) | (Mask{1} << face.v[2]));
      for (int n = 0; n < 3; ++n) {
        slots.push_back({Mask{1} << face.v[n], edge_masks[face.e[n]], kPi - mesh.face_weight(f, n)});
      }
    }
  }

  double bound(Mask subset) const {
    int chi = std::popcount(subset);
    for (Mask e : edge_masks) chi -= (e & ~subset) == 0;
    for (Mask f : face_masks) chi += (f & ~subset) == 0;
    double link = 0.0;
    for (const LinkSlot& s : slots) {
      if ((s.vertex & subset) && (s.opposite & subset) == 0) link += s.cost;
    }
    return -link + 2.0 * kPi * chi;
  }
};

struct ScanState {
  bool has_witness = false;
  Mask witness = 0;
  double witness_bound = 0.0;
  double witness_margin = 0.0;
  bool has_tightest = false;
  Mask tightest = 0;
  double tightest_bound = 0.0;
  double tightest_margin = 0.0;
  std::vector<std::pair<Mask, std::pair<double, double>>> ties;
};

bool reaches(double sum, double threshold) { return sum >= threshold * (1.0 - 1e-12); }

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::near_tie: return "near_tie";
    case Verdict::skipped: return "skipped";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

double subset_bound(const WeightedTriangulation& mesh, const VertexSubset& subset) {
  const SubcomplexStats stats = subcomplex_and_link(mesh, subset);
  double link = 0.0;
  for (const LinkPair& pair : stats.link_pairs) link += kPi - mesh.edge(pair.edge).weight;
  return -link + 2.0 * kPi * stats.euler_char;
}

SubsetConditionResult check_subset_condition(const WeightedTriangulation& mesh,
                                     const SubsetConditionOptions& options) {
  const int n = mesh.vertex_count();
  const std::vector<double> targets =
      options.targets.empty() ? default_targets(mesh, Geometry::euclidean) : options.targets;
  if (static_cast<int>(targets.size()) != n) {
    throw std::invalid_argument("subset condition needs one target per vertex");
  }

  SubsetConditionResult result;
  if (n > options.subset_cap || n > 31) {
    result.exhaustive = false;
    result.verdict = Verdict::skipped;
    for (ShortLoop& loop : enumerate_short_loops(mesh, 4)) {
      if (loop.homotopy != Homotopy::null_homotopic) continue;
      const bool flagged = loop.edges.size() == 3
                               ? reaches(loop.weight_sum, kPi) && !loop.bounds_face
                               : reaches(loop.weight_sum, 2.0 * kPi) && !loop.bounds_two_faces;
      if (flagged) result.loop_flags.push_back(std::move(loop));
    }
    return result;
  }
  if (n < 2) return result;

  const SubsetTables tables(mesh);
  const Mask full = (Mask{1} << n) - 1;
  const std::uint64_t count = full - 1;  // masks 1 .. full-1

  std::mutex merge_guard;
  ScanState merged;
  detail::parallel_for(count, 1u << 12, [&](std::size_t begin, std::size_t end) {
    ScanState local;
    for (std::size_t k = begin; k < end; ++k) {
      const Mask subset = static_cast<Mask>(k + 1);
      double lhs = 0.0;
      for (Mask m = subset; m != 0; m &= m - 1) lhs += targets[std::countr_zero(m)];
      const double bound = tables.bound(subset);
      const double margin = lhs - bound;
      const double slack = options.relative_slack * std::max({1.0, std::abs(lhs), std::abs(bound)});
      if (!local.has_tightest || margin < local.tightest_margin) {
        local.has_tightest = true;
        local.tightest = subset;
        local.tightest_bound = bound;
        local.tightest_margin = margin;
      }
      if (margin < -slack) {
        if (!local.has_witness || lex_less(subset, local.witness)) {
          local.has_witness = true;
          local.witness = subset;
          local.witness_bound = bound;
          local.witness_margin = margin;
        }
      } else if (margin <= slack) {
        local.ties.push_back({subset, {bound, margin}});
      }
    }
    std::lock_guard lock(merge_guard);
    if (local.has_witness && (!merged.has_witness || lex_less(local.witness, merged.witness))) {
      merged.has_witness = true;
      merged.witness = local.witness;
      merged.witness_bound = local.witness_bound;
      merged.witness_margin = local.witness_margin;
    }
    if (local.has_tightest &&
        (!merged.has_tightest || local.tightest_margin < merged.tightest_margin ||
         (local.tightest_margin == merged.tightest_margin && lex_less(local.tightest, merged.tightest)))) {
      merged.has_tightest = true;
      merged.tightest = local.tightest;
      merged.tightest_bound = local.tightest_bound;
      merged.tightest_margin = local.tightest_margin;
    }
    merged.ties.insert(merged.ties.end(), local.ties.begin(), local.ties.end());
  });

  std::sort(merged.ties.begin(), merged.ties.end(),
            [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
  for (std::size_t k = 0; k < merged.ties.size() && k < options.max_near_ties; ++k) {
    const auto& [mask, values] = merged.ties[k];
    result.near_ties.push_back({members_of(mask), values.first, values.second});
  }
  if (merged.has_tightest) {
    result.tightest = SubsetMargin{members_of(merged.tightest), merged.tightest_bound,
                                   merged.tightest_margin};
  }
  if (merged.has_witness) {
    result.verdict = Verdict::fails;
    result.witness =
        SubsetMargin{members_of(merged.witness), merged.witness_bound, merged.witness_margin};
  } else if (!merged.ties.empty()) {
    result.verdict = Verdict::near_tie;
  }
  return result;
}

LoopConditionsResult check_loop_conditions(const WeightedTriangulation& mesh) {
  LoopConditionsResult result;
  for (ShortLoop& loop : enumerate_short_loops(mesh, 4)) {
    const bool three = loop.edges.size() == 3;
    LoopConditionResult& target = three ? result.three_loops : result.four_loops;
    if (!reaches(loop.weight_sum, three ? kPi : 2.0 * kPi)) continue;
    if (three ? loop.bounds_face : loop.bounds_two_faces) continue;
    if (loop.homotopy == Homotopy::essential) continue;
    if (loop.homotopy == Homotopy::undetermined) {
      target.undetermined.push_back(std::move(loop));
      continue;
    }
    if (!target.witness) target.witness = std::move(loop);
  }
  for (LoopConditionResult* r : {&result.three_loops, &result.four_loops}) {
    if (r->witness) {
      r->verdict = Verdict::fails;
    } else if (!r->undetermined.empty()) {
      r->verdict = Verdict::undetermined;
    }
  }
  return result;
}

std::vector<ProbeRow> degeneration_probe(const WeightedTriangulation& mesh,
                                         const PackingMetric& metric, const VertexSubset& subset,
                                         const std::vector<double>& factors) {
  const double bound = subset_bound(mesh, subset);
  std::vector<ProbeRow> rows;
  for (double factor : factors) {
    PackingMetric scaled = metric;
    for (int v : subset.members()) scaled.radii[v] *= factor;
    const CurvatureState state = curvature_state(mesh, scaled);
    double sum = 0.0;
    for (int v : subset.members()) sum += state.curvatures[v];
    rows.push_back({factor, sum, bound, sum - bound});
  }
  return rows;
}

}  // namespace circleflow
