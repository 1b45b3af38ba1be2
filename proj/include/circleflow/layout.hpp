#pragma once

// Development of a packing into the plane (euclidean) or the Poincare disk
// (hyperbolic) along a breadth-first spanning tree of the dual graph.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "circleflow/curvature.hpp"
#include "circleflow/mesh.hpp"

namespace circleflow {

using Point = std::complex<double>;

struct PlacedFace {
  int face = -1;
  std::array<Point, 3> position{};  // indexed like Face::v
  int parent = -1;                  // -1 for the seed
  int via_edge = -1;                // tree edge shared with the parent
};

struct LayoutPlan {
  Geometry geometry = Geometry::euclidean;
  int seed_face = 0;
  std::vector<PlacedFace> faces;  // BFS order, faces[0] is the seed
  std::vector<int> tree_edges;
  std::vector<int> cut_edges;
};

/// Throws UnsupportedLayout for spherical metrics.
LayoutPlan develop(const WeightedTriangulation& mesh, const PackingMetric& metric);

/// Hyperbolic distance between two points of the unit disk.
double poincare_distance(Point z, Point w);

/// Distance in the model of the plan's geometry.
double model_distance(Geometry g, Point z, Point w);

struct Disk {
  Point center;
  double radius = 0.0;
};

/// Euclidean disk that is the image of the hyperbolic circle with the given
/// center (in the unit disk) and hyperbolic radius.
Disk hyperbolic_circle_image(Point center, double radius);

/// Circle of vertex slot `slot` of a placed face, in model coordinates.
Disk vertex_circle(const LayoutPlan& plan, const PlacedFace& placed, int slot, double radius);

struct SvgOptions {
  double size = 800.0;
  double margin = 20.0;
};

/// Affine map from model coordinates to drawing units (y axis flipped).
struct DrawingTransform {
  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  Point apply(Point z) const { return {offset_x + scale * z.real(), offset_y - scale * z.imag()}; }
};

DrawingTransform drawing_transform(const LayoutPlan& plan, const WeightedTriangulation& mesh,
                                   const PackingMetric& metric, const SvgOptions& options = {});

std::string render_svg(const LayoutPlan& plan, const WeightedTriangulation& mesh,
                       const PackingMetric& metric, const SvgOptions& options = {});

}  // namespace circleflow
