#include "catdisc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "catdisc/error.hpp"

namespace catdisc {

namespace {

long long edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
}

[[noreturn]] void bad_mesh(const std::string& what) { throw Error(ErrorCode::invalid_mesh, what); }

// Orders the link edges of a vertex into a cycle or a path; returns nullopt
// when the link is not a single cycle or path.
std::optional<std::vector<int>> chain_link(const std::vector<std::pair<int, int>>& link, bool& is_cycle) {
  std::unordered_map<int, std::vector<int>> adj;
  for (const auto& [a, b] : link) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  int start = -1;
  int ends = 0;
  for (const auto& [w, nb] : adj) {
    if (nb.size() > 2) return std::nullopt;
    if (nb.size() == 1) {
      ++ends;
      if (start < 0 || w < start) start = w;
    }
  }
  if (ends != 0 && ends != 2) return std::nullopt;
  is_cycle = ends == 0;
  if (is_cycle) {
    start = adj.begin()->first;
    for (const auto& [w, nb] : adj) start = std::min(start, w);
  }
  std::vector<int> order{start};
  int prev = -1;
  int cur = start;
  while (true) {
    const auto& nb = adj[cur];
    int next = -1;
    if (prev < 0) {
      next = nb.size() == 2 ? std::min(nb[0], nb[1]) : nb[0];
    } else if (nb.size() == 2) {
      next = nb[0] == prev ? nb[1] : nb[0];
    }
    if (next < 0 || next == start) break;
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  if (order.size() != adj.size()) return std::nullopt;
  return order;
}

}  // namespace

void DiscMesh::index_edges() {
  const int n = static_cast<int>(neighbors_.size());
  edge_index_.clear();
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    auto& [a, b] = edges_[e];
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= n || a == b) bad_mesh("edge endpoints out of range or equal");
    if (!edge_index_.emplace(edge_key(a, b), e).second) bad_mesh("duplicate edge");
    neighbors_[a].push_back(b);
    neighbors_[b].push_back(a);
    incident_edges_[a].push_back(e);
    incident_edges_[b].push_back(e);
  }
}

DiscMesh DiscMesh::from_edges(int vertex_count, std::vector<Edge> edges) {
  if (vertex_count < 1) bad_mesh("graph needs at least one vertex");
  DiscMesh m;
  m.neighbors_.assign(vertex_count, {});
  m.incident_edges_.assign(vertex_count, {});
  m.boundary_.assign(vertex_count, 0);
  m.edges_ = std::move(edges);
  m.index_edges();
  m.rotation_ = m.neighbors_;
  m.edge_triangles_.assign(m.edges_.size(), {});
  m.uv_.assign(vertex_count, Vec2{});
  return m;
}

DiscMesh DiscMesh::from_triangles(std::vector<Vec2> uv, std::vector<Triangle> triangles) {
  const int n = static_cast<int>(uv.size());
  if (triangles.empty()) bad_mesh("triangulation has no triangles");
  DiscMesh m;
  m.uv_ = std::move(uv);
  m.triangles_ = std::move(triangles);
  m.neighbors_.assign(n, {});
  m.incident_edges_.assign(n, {});
  m.boundary_.assign(n, 0);

  std::unordered_map<long long, int> seen;
  std::vector<int> triangle_count;
  for (int t = 0; t < static_cast<int>(m.triangles_.size()); ++t) {
    const Triangle& tri = m.triangles_[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= n) bad_mesh("triangle " + std::to_string(t) + " has a vertex out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      bad_mesh("triangle " + std::to_string(t) + " repeats a vertex");
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      auto [it, fresh] = seen.emplace(edge_key(a, b), static_cast<int>(m.edges_.size()));
      if (fresh) {
        m.edges_.push_back({std::min(a, b), std::max(a, b)});
        triangle_count.push_back(0);
        m.edge_triangles_.push_back({});
      }
      ++triangle_count[it->second];
      m.edge_triangles_[it->second].push_back(t);
    }
  }
  m.index_edges();

  for (int e = 0; e < m.edge_count(); ++e) {
    if (triangle_count[e] > 2) bad_mesh("edge shared by more than two triangles");
    if (triangle_count[e] == 1) {
      m.boundary_[m.edges_[e].first] = 1;
      m.boundary_[m.edges_[e].second] = 1;
    }
  }

  // Boundary edges must form one cycle through every boundary vertex.
  std::vector<std::vector<int>> bnb(n);
  int boundary_edges = 0;
  for (int e = 0; e < m.edge_count(); ++e) {
    if (triangle_count[e] != 1) continue;
    ++boundary_edges;
    bnb[m.edges_[e].first].push_back(m.edges_[e].second);
    bnb[m.edges_[e].second].push_back(m.edges_[e].first);
  }
  int boundary_vertices = 0;
  int first_boundary = -1;
  for (int v = 0; v < n; ++v) {
    if (!m.boundary_[v]) continue;
    ++boundary_vertices;
    if (first_boundary < 0) first_boundary = v;
    if (bnb[v].size() != 2) bad_mesh("boundary is not a simple cycle at vertex " + std::to_string(v));
  }
  if (boundary_vertices == 0) bad_mesh("triangulation has no boundary");
  int walked = 1;
  for (int prev = first_boundary, cur = bnb[first_boundary][0]; cur != first_boundary; ++walked) {
    const int next = bnb[cur][0] == prev ? bnb[cur][1] : bnb[cur][0];
    prev = cur;
    cur = next;
    if (walked > n) break;
  }
  if (walked != boundary_vertices || boundary_edges != boundary_vertices) bad_mesh("boundary is not a single cycle");

  if (n - m.edge_count() + m.triangle_count() != 1) {
    bad_mesh("Euler characteristic V - E + F = " + std::to_string(n - m.edge_count() + m.triangle_count()) +
             ", a disc needs 1");
  }

  std::vector<std::vector<std::pair<int, int>>> links(n);
  for (const Triangle& tri : m.triangles_) {
    for (int k = 0; k < 3; ++k) links[tri[k]].push_back({tri[(k + 1) % 3], tri[(k + 2) % 3]});
  }
  m.rotation_.assign(n, {});
  for (int v = 0; v < n; ++v) {
    if (links[v].empty()) bad_mesh("vertex " + std::to_string(v) + " belongs to no triangle");
    bool cycle = false;
    auto order = chain_link(links[v], cycle);
    if (!order || cycle == static_cast<bool>(m.boundary_[v])) {
      bad_mesh("link of vertex " + std::to_string(v) + " is not a single " + (m.boundary_[v] ? "arc" : "cycle"));
    }
    m.rotation_[v] = std::move(*order);
  }
  return m;
}

DiscMesh DiscMesh::grid(int nu, int nv) {
  if (nu < 2 || nv < 2) bad_mesh("grid needs at least 2 vertices per side");
  std::vector<Vec2> uv;
  uv.reserve(static_cast<std::size_t>(nu) * nv);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) uv.push_back({static_cast<double>(i) / (nu - 1), static_cast<double>(j) / (nv - 1)});
  }
  std::vector<Triangle> tris;
  tris.reserve(2 * static_cast<std::size_t>(nu - 1) * (nv - 1));
  auto id = [nu](int i, int j) { return j * nu + i; };
  for (int j = 0; j + 1 < nv; ++j) {
    for (int i = 0; i + 1 < nu; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return from_triangles(std::move(uv), std::move(tris));
}

DiscMesh DiscMesh::fan(int spokes) {
  if (spokes < 3) bad_mesh("fan needs at least 3 spokes");
  std::vector<Vec2> uv{{0.0, 0.0}};
  std::vector<Triangle> tris;
  for (int k = 0; k < spokes; ++k) {
    const double a = 2.0 * std::numbers::pi * k / spokes;
    uv.push_back({std::cos(a), std::sin(a)});
    tris.push_back({0, 1 + k, 1 + (k + 1) % spokes});
  }
  return from_triangles(std::move(uv), std::move(tris));
}

std::vector<int> DiscMesh::interior_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v) {
    if (!boundary_[v]) out.push_back(v);
  }
  return out;
}

std::vector<int> DiscMesh::boundary_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v) {
    if (boundary_[v]) out.push_back(v);
  }
  return out;
}

int DiscMesh::edge_id(int a, int b) const {
  const auto it = edge_index_.find(edge_key(a, b));
  return it == edge_index_.end() ? -1 : it->second;
}

bool DiscMesh::connected() const {
  std::vector<char> seen(vertex_count(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : neighbors_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == vertex_count();
}

// ---------------------------------------------------------------------------

MappedGraph MappedGraph::make(std::shared_ptr<const DiscMesh> mesh, TargetSpace space, std::vector<TargetPoint> images,
                              std::optional<std::vector<char>> fixed) {
  MappedGraph mg{std::move(mesh), std::move(space), std::move(images), {}, {}};
  if (fixed) {
    mg.fixed = std::move(*fixed);
  } else {
    mg.fixed.assign(mg.mesh->vertex_count(), 0);
    for (int v = 0; v < mg.mesh->vertex_count(); ++v) mg.fixed[v] = mg.mesh->is_boundary(v) ? 1 : 0;
  }
  mg.validate();
  return mg;
}

std::vector<int> MappedGraph::fixed_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v) {
    if (fixed[v]) out.push_back(v);
  }
  return out;
}

std::vector<int> MappedGraph::free_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v) {
    if (!fixed[v]) out.push_back(v);
  }
  return out;
}

double MappedGraph::edge_length(int e) const {
  const auto [a, b] = mesh->edges()[e];
  return space.distance(images[a], images[b]);
}

std::vector<double> MappedGraph::edge_lengths() const {
  std::vector<double> out(mesh->edge_count());
  for (int e = 0; e < mesh->edge_count(); ++e) out[e] = edge_length(e);
  return out;
}

void MappedGraph::validate() const {
  if (!mesh) throw Error(ErrorCode::invalid_argument, "mapped graph has no mesh");
  if (static_cast<int>(images.size()) != mesh->vertex_count()) {
    throw Error(ErrorCode::invalid_argument, "one image per vertex required");
  }
  if (static_cast<int>(fixed.size()) != mesh->vertex_count()) {
    throw Error(ErrorCode::invalid_argument, "fixed mask must have one entry per vertex");
  }
  if (std::none_of(fixed.begin(), fixed.end(), [](char c) { return c != 0; })) {
    throw Error(ErrorCode::invalid_argument, "fixed set must be nonempty");
  }
  for (const auto& p : images) space.validate(p);
  if (!edge_polylines.empty()) {
    if (static_cast<int>(edge_polylines.size()) != mesh->edge_count()) {
      throw Error(ErrorCode::invalid_argument, "one polyline per edge required");
    }
    for (const auto& line : edge_polylines) {
      if (line.size() < 2) throw Error(ErrorCode::invalid_argument, "edge polylines need at least 2 points");
      for (const auto& p : line) space.validate(p);
    }
  }
}

}  // namespace catdisc
