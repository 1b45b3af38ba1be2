#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "circleflow/errors.hpp"
#include "circleflow/layout.hpp"

namespace circleflow {

namespace {

// Orientation preserving isometry of the model sending p to 0 and q to the
// positive real axis, with its inverse.
struct Frame {
  Geometry g;
  Point p;
  Point rot;  // unit complex number

  Point to_local(Point z) const {
    if (g == Geometry::euclidean) return (z - p) / rot;
    return (z - p) / (1.0 - std::conj(p) * z) / rot;
  }
  Point from_local(Point w) const {
    w *= rot;
    if (g == Geometry::euclidean) return w + p;
    return (w + p) / (1.0 + std::conj(p) * w);
  }
};

Frame make_frame(Geometry g, Point p, Point q) {
  Frame frame{g, p, 1.0};
  const Point local = frame.to_local(q);
  frame.rot = local / std::abs(local);
  return frame;
}

// Model-radius of a point at distance d from the origin.
double radial(Geometry g, double d) { return g == Geometry::euclidean ? d : std::tanh(d / 2); }

// Position of slot `n`, given the placed endpoints of the edge opposite it.
// `side` is +1 or -1: which half plane (in the frame of the edge) receives it.
Point place_third(Geometry g, const TriangleAngles& ang, const std::array<Point, 3>& pos, int n,
                  double side) {
  const int a = (n + 1) % 3;  // slot a, then slot b = n + 2
  const int b = (n + 2) % 3;
  const Frame frame = make_frame(g, pos[a], pos[b]);
  // Edge a-n is the edge opposite slot b.
  const double d = radial(g, ang.lengths[b]);
  return frame.from_local(std::polar(d, side * ang.angles[a]));
}

}  // namespace

double poincare_distance(Point z, Point w) {
  const double num = std::abs(z - w);
  const double den = std::abs(1.0 - std::conj(z) * w);
  return 2.0 * std::atanh(num / den);
}

double model_distance(Geometry g, Point z, Point w) {
  return g == Geometry::hyperbolic ? poincare_distance(z, w) : std::abs(z - w);
}

Disk hyperbolic_circle_image(Point center, double radius) {
  const double rho = std::abs(center);
  const double dist = 2.0 * std::atanh(rho);
  const Point dir = rho > 0 ? center / rho : Point(1.0, 0.0);
  const double far = std::tanh((dist + radius) / 2);
  // The near end lies on the opposite side of the origin when radius > dist.
  const double near = std::tanh((dist - radius) / 2);
  return {dir * ((far + near) / 2), (far - near) / 2};
}

Disk vertex_circle(const LayoutPlan& plan, const PlacedFace& placed, int slot, double radius) {
  const Point c = placed.position[slot];
  if (plan.geometry == Geometry::hyperbolic) return hyperbolic_circle_image(c, radius);
  return {c, radius};
}

LayoutPlan develop(const WeightedTriangulation& mesh, const PackingMetric& metric) {
  if (metric.geometry == Geometry::spherical) {
    throw UnsupportedLayout("spherical packings cannot be developed into the plane or disk");
  }
  check_metric(mesh, metric);
  const Geometry g = metric.geometry;
  const int F = mesh.face_count();

  std::vector<TriangleAngles> angles(F);
  for (int f = 0; f < F; ++f) angles[f] = tri_angles(face_config(mesh, metric, f));

  LayoutPlan plan;
  plan.geometry = g;
  plan.seed_face = 0;
  std::vector<int> placed_index(F, -1);
  std::vector<bool> is_tree(mesh.edge_count(), false);

  PlacedFace seed;
  seed.face = 0;
  seed.position[0] = 0.0;
  seed.position[1] = radial(g, angles[0].lengths[2]);
  seed.position[2] = place_third(g, angles[0], seed.position, 2, +1.0);
  placed_index[0] = 0;
  plan.faces.push_back(seed);

  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    const Face& face = mesh.face(f);
    for (int n = 0; n < 3; ++n) {
      const int e = face.e[n];
      for (const Corner& c : mesh.edge_faces(e)) {
        if (c.face == f || placed_index[c.face] >= 0) continue;
        const PlacedFace& parent = plan.faces[placed_index[f]];
        const Face& next = mesh.face(c.face);
        const int m = c.slot;
        PlacedFace child;
        child.face = c.face;
        child.parent = f;
        child.via_edge = e;
        for (int k = 1; k <= 2; ++k) {
          const int slot = (m + k) % 3;
          for (int j = 1; j <= 2; ++j) {
            if (face.v[(n + j) % 3] == next.v[slot]) child.position[slot] = parent.position[(n + j) % 3];
          }
        }
        // The new apex goes to the side of the shared edge away from the
        // parent's apex.
        const int a = (m + 1) % 3;
        const int b = (m + 2) % 3;
        const Frame frame = make_frame(g, child.position[a], child.position[b]);
        const double parent_side = frame.to_local(parent.position[n]).imag();
        child.position[m] = place_third(g, angles[c.face], child.position, m, parent_side > 0 ? -1.0 : 1.0);
        placed_index[c.face] = static_cast<int>(plan.faces.size());
        plan.faces.push_back(child);
        is_tree[e] = true;
        queue.push_back(c.face);
      }
    }
  }
  for (int e = 0; e < mesh.edge_count(); ++e) (is_tree[e] ? plan.tree_edges : plan.cut_edges).push_back(e);
  return plan;
}

DrawingTransform drawing_transform(const LayoutPlan& plan, const WeightedTriangulation& mesh,
                                   const PackingMetric& metric, const SvgOptions& options) {
  double lo_x = -1, hi_x = 1, lo_y = -1, hi_y = 1;
  if (plan.geometry == Geometry::euclidean) {
    lo_x = lo_y = std::numeric_limits<double>::infinity();
    hi_x = hi_y = -lo_x;
    for (const PlacedFace& placed : plan.faces) {
      for (int n = 0; n < 3; ++n) {
        const Disk d = vertex_circle(plan, placed, n, metric.radii[mesh.face(placed.face).v[n]]);
        lo_x = std::min(lo_x, d.center.real() - d.radius);
        hi_x = std::max(hi_x, d.center.real() + d.radius);
        lo_y = std::min(lo_y, d.center.imag() - d.radius);
        hi_y = std::max(hi_y, d.center.imag() + d.radius);
      }
    }
  }
  const double inner = options.size - 2 * options.margin;
  const double span = std::max(hi_x - lo_x, hi_y - lo_y);
  DrawingTransform t;
  t.scale = inner / span;
  t.offset_x = options.margin - t.scale * lo_x + (inner - t.scale * (hi_x - lo_x)) / 2;
  t.offset_y = options.margin + t.scale * hi_y + (inner - t.scale * (hi_y - lo_y)) / 2;
  return t;
}

std::string render_svg(const LayoutPlan& plan, const WeightedTriangulation& mesh,
                       const PackingMetric& metric, const SvgOptions& options) {
  const DrawingTransform t = drawing_transform(plan, mesh, metric, options);
  std::vector<bool> is_cut(mesh.edge_count(), false);
  for (int e : plan.cut_edges) is_cut[e] = true;

  std::ostringstream svg;
  svg.precision(10);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size << "\" height=\""
      << options.size << "\" viewBox=\"0 0 " << options.size << ' ' << options.size << "\">\n";
  if (plan.geometry == Geometry::hyperbolic) {
    const Point o = t.apply(0.0);
    svg << "  <circle cx=\"" << o.real() << "\" cy=\"" << o.imag() << "\" r=\"" << t.scale
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
  }
  svg << "  <g fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"0.8\">\n";
  for (const PlacedFace& placed : plan.faces) {
    for (int n = 0; n < 3; ++n) {
      const Disk d = vertex_circle(plan, placed, n, metric.radii[mesh.face(placed.face).v[n]]);
      const Point c = t.apply(d.center);
      svg << "    <circle cx=\"" << c.real() << "\" cy=\"" << c.imag() << "\" r=\"" << t.scale * d.radius
          << "\"/>\n";
    }
  }
  svg << "  </g>\n  <g stroke=\"#333\" stroke-width=\"0.6\">\n";
  // Hyperbolic edges are drawn as chords rather than geodesic arcs.
  for (const PlacedFace& placed : plan.faces) {
    const Face& face = mesh.face(placed.face);
    for (int n = 0; n < 3; ++n) {
      const Point p = t.apply(placed.position[(n + 1) % 3]);
      const Point q = t.apply(placed.position[(n + 2) % 3]);
      svg << "    <line x1=\"" << p.real() << "\" y1=\"" << p.imag() << "\" x2=\"" << q.real()
          << "\" y2=\"" << q.imag() << '"';
      if (is_cut[face.e[n]]) svg << " stroke-dasharray=\"4 3\"";
      svg << "/>\n";
    }
  }
  svg << "  </g>\n</svg>\n";
  return svg.str();
}

}  // namespace circleflow
