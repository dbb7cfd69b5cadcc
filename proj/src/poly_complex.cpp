#include "catdisc/poly_complex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "catdisc/defaults.hpp"
#include "catdisc/error.hpp"

namespace catdisc {

namespace {

constexpr std::array<std::array<int, 2>, 3> side_corners{{{0, 1}, {0, 2}, {1, 2}}};

}  // namespace

PolyComplex PolyComplex::glue(std::shared_ptr<const DiscMesh> mesh, std::vector<double> edge_lengths,
                              Kappa chart_kappa) {
  if (!mesh || !mesh->has_triangulation()) throw Error(ErrorCode::invalid_mesh, "gluing needs a triangulated disc");
  if (static_cast<int>(edge_lengths.size()) != mesh->edge_count()) {
    throw Error(ErrorCode::invalid_argument, "one length per edge required");
  }
  for (double& l : edge_lengths) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorCode::invalid_argument, "edge lengths must be finite, >= 0");
    if (l < defaults::zero_side) l = 0.0;
  }
  PolyComplex w(std::move(mesh), chart_kappa);
  const DiscMesh& m = *w.mesh_;
  w.edge_lengths_ = std::move(edge_lengths);

  w.triangles_.reserve(m.triangle_count());
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Triangle& tri = m.triangles()[t];
    std::array<double, 3> sides{};
    for (int s = 0; s < 3; ++s) {
      sides[s] = w.edge_lengths_[m.edge_id(tri[side_corners[s][0]], tri[side_corners[s][1]])];
    }
    try {
      w.triangles_.push_back(build_comparison_triangle(chart_kappa, sides[0], sides[1], sides[2]));
    } catch (const Error& e) {
      throw Error(e.code(), "triangle " + std::to_string(t) + ": " + e.what());
    }
  }

  // Identify vertices joined by zero-length edges.
  const int n = m.vertex_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int e = 0; e < m.edge_count(); ++e) {
    if (w.edge_lengths_[e] == 0.0) {
      const int a = find(m.edges()[e].first);
      const int b = find(m.edges()[e].second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  w.vertex_class_.assign(n, -1);
  std::vector<int> root_class(n, -1);
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (root_class[r] < 0) {
      root_class[r] = static_cast<int>(w.class_boundary_.size());
      w.class_boundary_.push_back(0);
    }
    w.vertex_class_[v] = root_class[r];
    if (m.is_boundary(v)) w.class_boundary_[root_class[r]] = 1;
  }

  // Corners in rotation order: walk each vertex's rotation and pick the
  // triangle between consecutive neighbors.
  w.links_.assign(w.vertex_count(), {});
  w.fans_.assign(n, {});
  std::vector<std::vector<int>> vertex_triangles(n);
  for (int t = 0; t < m.triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) vertex_triangles[m.triangles()[t][k]].push_back(t);
  }
  for (int v = 0; v < n; ++v) {
    const auto& rot = m.cyclic_neighbors(v);
    const std::size_t count = m.is_boundary(v) ? rot.size() - 1 : rot.size();
    for (std::size_t k = 0; k < count; ++k) {
      const int a = rot[k];
      const int b = rot[(k + 1) % rot.size()];
      for (int t : vertex_triangles[v]) {
        const Triangle& tri = m.triangles()[t];
        const bool has_a = std::find(tri.begin(), tri.end(), a) != tri.end();
        const bool has_b = std::find(tri.begin(), tri.end(), b) != tri.end();
        if (!has_a || !has_b) continue;
        w.fans_[v].push_back(t);
        const Degeneracy d = w.triangles_[t].degeneracy;
        if (d == Degeneracy::point || d == Degeneracy::collapsed) break;
        const int local = static_cast<int>(std::find(tri.begin(), tri.end(), v) - tri.begin());
        w.links_[w.vertex_class_[v]].push_back({t, local});
        break;
      }
    }
  }
  return w;
}

double PolyComplex::gluing_defect() const {
  double worst = 0.0;
  for (int t = 0; t < mesh_->triangle_count(); ++t) {
    const Triangle& tri = mesh_->triangles()[t];
    const auto& ct = triangles_[t];
    for (int s = 0; s < 3; ++s) {
      const int e = mesh_->edge_id(tri[side_corners[s][0]], tri[side_corners[s][1]]);
      const double realized =
          model_distance(kappa_, ct.vertices[side_corners[s][0]], ct.vertices[side_corners[s][1]]);
      worst = std::max({worst, std::abs(ct.sides[s] - edge_lengths_[e]), std::abs(realized - edge_lengths_[e])});
    }
  }
  return worst;
}

int PolyComplex::degenerate_count(Degeneracy d) const {
  return static_cast<int>(
      std::count_if(triangles_.begin(), triangles_.end(), [d](const auto& t) { return t.degeneracy == d; }));
}

ModelPoint chart_point(Kappa kappa, const std::array<ModelPoint, 3>& v, const std::array<double, 3>& weights) {
  const double total = weights[0] + weights[1] + weights[2];
  if (!(total > 0.0) || weights[0] < 0.0 || weights[1] < 0.0 || weights[2] < 0.0) {
    throw Error(ErrorCode::invalid_argument, "barycentric weights must be >= 0 with positive sum");
  }
  const double w1 = weights[1] / total;
  const double w2 = weights[2] / total;
  const double far = w1 + w2;
  if (far <= 0.0) return v[0];
  const ModelPoint opposite = geodesic_point(kappa, v[1], v[2], w2 / far);
  return geodesic_point(kappa, v[0], opposite, std::min(far, 1.0));
}

PolyPoint poly_point(const PolyComplex& complex, int triangle, const std::array<double, 3>& weights) {
  if (triangle < 0 || triangle >= complex.mesh().triangle_count()) {
    throw Error(ErrorCode::invalid_argument, "triangle index out of range");
  }
  return {triangle, chart_point(complex.kappa(), complex.triangles()[triangle].vertices, weights)};
}

PolyPoint vertex_poly_point(const PolyComplex& complex, int v) {
  const int t = complex.fan(v).front();
  const Triangle& tri = complex.mesh().triangles()[t];
  const int local = static_cast<int>(std::find(tri.begin(), tri.end(), v) - tri.begin());
  return {t, complex.triangles()[t].vertices[local]};
}

// ---------------------------------------------------------------------------

SteinerGraph::SteinerGraph(const PolyComplex& complex, int refinement, bool chords)
    : complex_(complex), refinement_(refinement) {
  if (refinement < 0) throw Error(ErrorCode::invalid_argument, "refinement must be >= 0");
  const DiscMesh& m = complex_.mesh();
  const Kappa kappa = complex_.kappa();
  const int n = m.vertex_count();
  const int r = refinement_;
  const int nodes = n + m.edge_count() * r;
  node_triangle_.assign(nodes, -1);
  node_slot_.assign(nodes, -1);

  std::vector<CsrGraph::Arc> arcs;
  for (int e = 0; e < m.edge_count(); ++e) {
    const double step = complex_.edge_lengths()[e] / (r + 1);
    int prev = m.edges()[e].first;
    for (int k = 1; k <= r; ++k) {
      arcs.emplace_back(prev, edge_node(e, k), step);
      prev = edge_node(e, k);
    }
    arcs.emplace_back(prev, m.edges()[e].second, step);
  }

  const int per_triangle = 3 + 3 * r;
  tri_offsets_.reserve(m.triangle_count() + 1);
  tri_offsets_.push_back(0);
  std::vector<int> side_of;  // bitmask of sides per sample within a triangle
  for (int t = 0; t < m.triangle_count(); ++t) {
    const Triangle& tri = m.triangles()[t];
    const auto& verts = complex_.triangles()[t].vertices;
    const int base = static_cast<int>(tri_nodes_.size());
    side_of.assign(per_triangle, 0);
    for (int k = 0; k < 3; ++k) {
      tri_nodes_.push_back(tri[k]);
      tri_positions_.push_back(verts[k]);
    }
    side_of[0] = 0b011;
    side_of[1] = 0b101;
    side_of[2] = 0b110;
    for (int s = 0; s < 3; ++s) {
      const int li = side_corners[s][0];
      const int lj = side_corners[s][1];
      const int e = m.edge_id(tri[li], tri[lj]);
      const bool forward = m.edges()[e].first == tri[li];
      for (int k = 1; k <= r; ++k) {
        const double f = static_cast<double>(k) / (r + 1);
        tri_nodes_.push_back(edge_node(e, forward ? k : r + 1 - k));
        tri_positions_.push_back(geodesic_point(kappa, verts[li], verts[lj], f));
        side_of[3 + s * r + (k - 1)] = 1 << s;
      }
    }
    for (int a = 0; a < per_triangle; ++a) {
      const int node = tri_nodes_[base + a];
      if (node_triangle_[node] < 0) {
        node_triangle_[node] = t;
        node_slot_[node] = base + a;
      }
      for (int b = a + 1; chords && b < per_triangle; ++b) {
        if (side_of[a] & side_of[b]) continue;
        arcs.emplace_back(node, tri_nodes_[base + b],
                          model_distance(kappa, tri_positions_[base + a], tri_positions_[base + b]));
      }
    }
    tri_offsets_.push_back(static_cast<int>(tri_nodes_.size()));
  }
  graph_ = CsrGraph(nodes, arcs);
}

int SteinerGraph::edge_node(int e, int k) const { return complex_.mesh().vertex_count() + e * refinement_ + (k - 1); }

std::span<const int> SteinerGraph::triangle_nodes(int t) const {
  return {tri_nodes_.data() + tri_offsets_[t], tri_nodes_.data() + tri_offsets_[t + 1]};
}

std::span<const ModelPoint> SteinerGraph::triangle_positions(int t) const {
  return {tri_positions_.data() + tri_offsets_[t], tri_positions_.data() + tri_offsets_[t + 1]};
}

const ModelPoint& SteinerGraph::node_position(int node) const { return tri_positions_[node_slot_[node]]; }

ModelPoint SteinerGraph::position(const PolyPoint& p) const {
  if (p.triangle < 0 || p.triangle >= complex_.mesh().triangle_count()) {
    throw Error(ErrorCode::invalid_argument, "triangle index out of range");
  }
  return p.chart;
}

std::vector<std::pair<int, double>> SteinerGraph::attach(const PolyPoint& p) const {
  const ModelPoint x = position(p);
  const auto nodes = triangle_nodes(p.triangle);
  const auto pos = triangle_positions(p.triangle);
  std::vector<std::pair<int, double>> out;
  out.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) out.push_back({nodes[k], model_distance(complex_.kappa(), x, pos[k])});
  return out;
}

ShortestPathTree SteinerGraph::from(const PolyPoint& a) const {
  const auto sources = attach(a);
  return dijkstra(graph_, sources);
}

double SteinerGraph::distance_to(const ShortestPathTree& tree, const PolyPoint& b) const {
  double best = unreachable;
  for (const auto& [node, d] : attach(b)) best = std::min(best, tree.dist[node] + d);
  return best;
}

double SteinerGraph::distance(const PolyPoint& a, const PolyPoint& b) const {
  double best = distance_to(from(a), b);
  if (a.triangle == b.triangle) best = std::min(best, model_distance(complex_.kappa(), position(a), position(b)));
  return best;
}

double intrinsic_distance(const PolyComplex& complex, const PolyPoint& a, const PolyPoint& b, int refinement) {
  return SteinerGraph(complex, refinement).distance(a, b);
}

std::vector<double> regularized_lengths(const DiscMesh& mesh, std::span<const double> edge_lengths, double delta,
                                        int* touched) {
  std::vector<char> bump(edge_lengths.size(), 0);
  int count = 0;
  for (const Triangle& t : mesh.triangles()) {
    const std::array<int, 3> e{mesh.edge_id(t[0], t[1]), mesh.edge_id(t[0], t[2]), mesh.edge_id(t[1], t[2])};
    const double a = edge_lengths[e[0]];
    const double b = edge_lengths[e[1]];
    const double c = edge_lengths[e[2]];
    if (a + b + c - 2.0 * std::max({a, b, c}) >= 2.0 * delta) continue;
    ++count;
    for (int k : e) bump[k] = 1;
  }
  std::vector<double> out(edge_lengths.begin(), edge_lengths.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (bump[k]) out[k] += delta;
  }
  if (touched) *touched = count;
  return out;
}

}  // namespace catdisc
