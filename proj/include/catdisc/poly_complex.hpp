#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "catdisc/mesh.hpp"
#include "catdisc/model_surface.hpp"
#include "catdisc/shortest_paths.hpp"

namespace catdisc {

// Constant-curvature triangles glued along the combinatorics of a disc mesh.
// Triangle t of the mesh with vertices (a, b, c) becomes the comparison
// triangle with sides (|ab|, |ac|, |bc|) taken from the edge lengths; mesh
// vertices joined by a zero-length edge are one point of the complex.
class PolyComplex {
 public:
  static PolyComplex glue(std::shared_ptr<const DiscMesh> mesh, std::vector<double> edge_lengths, Kappa chart_kappa);

  const DiscMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const DiscMesh>& mesh_ptr() const { return mesh_; }
  Kappa kappa() const { return kappa_; }
  const std::vector<double>& edge_lengths() const { return edge_lengths_; }
  const std::vector<ComparisonTriangle>& triangles() const { return triangles_; }

  // Mesh vertex -> vertex of the complex.
  const std::vector<int>& vertex_class() const { return vertex_class_; }
  int vertex_count() const { return static_cast<int>(class_boundary_.size()); }
  bool is_boundary_vertex(int w) const { return class_boundary_[w] != 0; }

  // Corners (triangle, local index) at complex vertex w whose triangle is
  // neither a point nor collapsed, in the rotation order of the mesh.
  const std::vector<std::pair<int, int>>& link(int w) const { return links_[w]; }

  // Largest |stored side - glued edge length|; zero unless rounding.
  double gluing_defect() const;

  int degenerate_count(Degeneracy d) const;

  // All triangles around mesh vertex v in rotation order (a cycle for
  // interior vertices).
  const std::vector<int>& fan(int v) const { return fans_[v]; }

 private:
  PolyComplex(std::shared_ptr<const DiscMesh> mesh, Kappa k) : mesh_(std::move(mesh)), kappa_(k) {}

  std::shared_ptr<const DiscMesh> mesh_;
  Kappa kappa_;
  std::vector<double> edge_lengths_;
  std::vector<ComparisonTriangle> triangles_;
  std::vector<int> vertex_class_;
  std::vector<char> class_boundary_;
  std::vector<std::vector<std::pair<int, int>>> links_;
  std::vector<std::vector<int>> fans_;
};

// Edge lengths with `delta` added to every side of each triangle whose
// triangle-inequality excess (perimeter - 2 * longest side) is below
// 2 * delta. The result has no degenerate triangles and is within delta per
// edge of the input. `touched` receives the number of such triangles.
std::vector<double> regularized_lengths(const DiscMesh& mesh, std::span<const double> edge_lengths, double delta,
                                        int* touched = nullptr);

// A point of the complex: a triangle and a position in its chart.
struct PolyPoint {
  int triangle = 0;
  ModelPoint chart;
};

// Chart position of barycentric weights in a model triangle, realized by
// iterated geodesics x = geo(v0, geo(v1, v2, w2 / (w1 + w2)), w1 + w2).
ModelPoint chart_point(Kappa kappa, const std::array<ModelPoint, 3>& vertices, const std::array<double, 3>& weights);

PolyPoint poly_point(const PolyComplex& complex, int triangle, const std::array<double, 3>& weights);

// Mesh vertex v as a point of the first triangle of its fan.
PolyPoint vertex_poly_point(const PolyComplex& complex, int v);

// Shortest paths on the complex approximated from above: mesh vertices plus
// `refinement` Steiner points per edge, joined along edges and by chords
// (model distances in the triangle chart) between samples on different
// sides of each triangle. Without chords paths follow mesh edges only.
class SteinerGraph {
 public:
  SteinerGraph(const PolyComplex& complex, int refinement, bool chords = true);

  int refinement() const { return refinement_; }
  const CsrGraph& graph() const { return graph_; }
  int node_count() const { return graph_.node_count(); }

  int vertex_node(int mesh_vertex) const { return mesh_vertex; }
  // Steiner point k in [1, refinement] of edge e, counted from e.first.
  int edge_node(int e, int k) const;

  // Sample nodes of triangle t and their chart positions.
  std::span<const int> triangle_nodes(int t) const;
  std::span<const ModelPoint> triangle_positions(int t) const;

  // One triangle containing the node (for locating path points).
  int node_triangle(int node) const { return node_triangle_[node]; }
  const ModelPoint& node_position(int node) const;

  ModelPoint position(const PolyPoint& p) const;

  // Connections (node, chord length) from a point to its triangle's samples.
  std::vector<std::pair<int, double>> attach(const PolyPoint& p) const;

  double distance(const PolyPoint& a, const PolyPoint& b) const;
  ShortestPathTree from(const PolyPoint& a) const;
  ShortestPathTree from_node(int node) const { return dijkstra(graph_, node); }

  // Distance from a shortest-path tree to a point.
  double distance_to(const ShortestPathTree& tree, const PolyPoint& b) const;

  const PolyComplex& complex() const { return complex_; }

 private:
  PolyComplex complex_;
  int refinement_;
  CsrGraph graph_;
  std::vector<int> tri_offsets_;
  std::vector<int> tri_nodes_;
  std::vector<ModelPoint> tri_positions_;
  std::vector<int> node_triangle_;
  std::vector<int> node_slot_;  // index into tri_positions_ of one occurrence
};

// Shortest-path distance between two points of the complex at the given
// Steiner refinement.
double intrinsic_distance(const PolyComplex& complex, const PolyPoint& a, const PolyPoint& b, int refinement);

}  // namespace catdisc
