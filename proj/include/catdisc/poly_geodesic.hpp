#pragma once

#include <vector>

#include "catdisc/poly_complex.hpp"
#include "catdisc/shortest_paths.hpp"

namespace catdisc {

// A path in a PolyComplex. When `taut`, the path is a chain of model
// geodesics through a developed strip of triangles; otherwise it follows the
// Steiner graph chord by chord.
struct PolyPath {
  double length = 0.0;
  bool taut = false;

  struct Piece {
    int triangle = -1;  // taut: first strip index of the piece; else mesh triangle
    int last = -1;      // taut: last strip index
    ModelPoint from;
    ModelPoint to;
    double start = 0.0;  // arclength at `from`
    double length = 0.0;
  };
  std::vector<Piece> pieces;

  // Taut paths only: strip triangles with developed and chart vertices.
  std::vector<int> strip;
  std::vector<std::array<ModelPoint, 3>> developed;
};

// Shortest paths of the complex: Dijkstra on the Steiner graph selects a
// strip of triangles, the strip is developed into the model surface of the
// chart curvature and the path is pulled taut by a funnel walk in a
// projective chart where model geodesics are straight lines. Bends at
// interior vertices are retried around the other side of the vertex. Strips
// through degenerate triangles, or that do not fit in an open hemisphere,
// keep the Steiner path.
class PolyGeodesics {
 public:
  // With `taut` false every path is the Steiner path.
  explicit PolyGeodesics(const SteinerGraph& graph, bool taut = true) : graph_(graph), taut_(taut) {}

  // `from_a` must be the Steiner tree of `a` (SteinerGraph::from).
  PolyPath shortest(const PolyPoint& a, const ShortestPathTree& from_a, const PolyPoint& b) const;
  PolyPath shortest(const PolyPoint& a, const PolyPoint& b) const { return shortest(a, graph_.from(a), b); }

  // Point at the given arclength (clamped to the path).
  PolyPoint point_at(const PolyPath& path, double arclength) const;

  const SteinerGraph& graph() const { return graph_; }

 private:
  const SteinerGraph& graph_;
  bool taut_;
};

}  // namespace catdisc
