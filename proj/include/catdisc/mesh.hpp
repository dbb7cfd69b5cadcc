#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "catdisc/target_space.hpp"
#include "catdisc/vec.hpp"

namespace catdisc {

using Edge = std::pair<int, int>;  // stored with first < second
using Triangle = std::array<int, 3>;

// A finite graph, optionally carrying a triangulation of the disc. Meshes
// built from triangles are validated (single boundary cycle, Euler
// characteristic 1, manifold links); plain graphs only need distinct
// endpoints and no duplicate edges.
class DiscMesh {
 public:
  static DiscMesh from_triangles(std::vector<Vec2> uv, std::vector<Triangle> triangles);
  static DiscMesh from_edges(int vertex_count, std::vector<Edge> edges);

  // nu x nv vertices on [0,1]^2; vertex (i, j) has id j * nu + i and each
  // quad is split along its (i, j)-(i+1, j+1) diagonal.
  static DiscMesh grid(int nu, int nv);

  // One interior vertex (id 0) surrounded by `spokes` triangles whose outer
  // vertices sit on the unit circle.
  static DiscMesh fan(int spokes);

  int vertex_count() const { return static_cast<int>(neighbors_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  bool has_triangulation() const { return !triangles_.empty(); }

  const std::vector<Vec2>& uv() const { return uv_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
  const std::vector<int>& incident_edges(int v) const { return incident_edges_[v]; }

  bool is_boundary(int v) const { return boundary_[v] != 0; }
  std::vector<int> interior_vertices() const;
  std::vector<int> boundary_vertices() const;

  // Neighbors of v in the rotation order of the triangulation: a cycle for
  // interior vertices, an arc (first and last on the boundary) otherwise.
  // Without a triangulation this is the plain adjacency list.
  const std::vector<int>& cyclic_neighbors(int v) const { return rotation_[v]; }

  // Edge index of {a, b}, or -1.
  int edge_id(int a, int b) const;

  // Triangles containing edge e (one or two entries on a triangulation).
  const std::vector<int>& edge_triangles(int e) const { return edge_triangles_[e]; }

  // True if every vertex can reach vertex 0.
  bool connected() const;

 private:
  DiscMesh() = default;
  void index_edges();

  std::vector<Vec2> uv_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> incident_edges_;
  std::vector<std::vector<int>> rotation_;
  std::vector<std::vector<int>> edge_triangles_;
  std::vector<char> boundary_;
  std::unordered_map<long long, int> edge_index_;
};

// Vertex images of a mesh in a target space, with a nonempty fixed set.
struct MappedGraph {
  std::shared_ptr<const DiscMesh> mesh;
  TargetSpace space;
  std::vector<TargetPoint> images;
  std::vector<char> fixed;  // per vertex
  // Optional sampled image curve per edge (first/last entries are the
  // endpoint images). Empty means every edge is the geodesic between its
  // endpoints.
  std::vector<std::vector<TargetPoint>> edge_polylines;

  // Fixed set defaults to the boundary vertices of the mesh.
  static MappedGraph make(std::shared_ptr<const DiscMesh> mesh, TargetSpace space, std::vector<TargetPoint> images,
                          std::optional<std::vector<char>> fixed = std::nullopt);

  int vertex_count() const { return mesh->vertex_count(); }
  bool is_fixed(int v) const { return fixed[v] != 0; }
  std::vector<int> fixed_vertices() const;
  std::vector<int> free_vertices() const;

  double edge_length(int e) const;
  std::vector<double> edge_lengths() const;

  // Throws Error(invalid_argument / invalid_point) on inconsistent data.
  void validate() const;
};

}  // namespace catdisc
