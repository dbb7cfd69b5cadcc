#include "catdisc/poly_geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "catdisc/error.hpp"

namespace catdisc {

namespace {

constexpr int max_reroutes = 64;

struct Support {
  enum Kind { vertex, edge, triangle } kind;
  int id;
};

bool contains(const DiscMesh& m, int t, const Support& s) {
  const Triangle& tri = m.triangles()[t];
  auto has = [&](int v) { return std::find(tri.begin(), tri.end(), v) != tri.end(); };
  switch (s.kind) {
    case Support::vertex: return has(s.id);
    case Support::edge: return has(m.edges()[s.id].first) && has(m.edges()[s.id].second);
    default: return t == s.id;
  }
}

// Homogeneous coordinates in which isometries of the model act linearly.
Vec3 lift(Kappa k, const ModelPoint& p) { return k.sign() == 0 ? Vec3{p.coords.x, p.coords.y, 1.0} : p.coords; }

ModelPoint unlift(Kappa k, const Vec3& v) {
  if (k.sign() >= 0) return k.sign() == 0 ? planar_point(v.x / v.z, v.y / v.z) : project_to_model(k, v);
  // Radial rescale onto the upper sheet.
  const double q = v.z * v.z - v.x * v.x - v.y * v.y;
  if (!(q > 0.0) || !(v.z > 0.0)) throw Error(ErrorCode::invalid_point, "vector outside the light cone");
  return project_to_model(k, v * (k.radius() / std::sqrt(q)));
}

std::optional<std::array<double, 3>> solve3(const std::array<Vec3, 3>& v, const Vec3& x) {
  const double det = dot(v[0], cross(v[1], v[2]));
  if (!(std::abs(det) > 1e-300)) return std::nullopt;
  return std::array<double, 3>{dot(x, cross(v[1], v[2])) / det, dot(v[0], cross(x, v[2])) / det,
                               dot(v[0], cross(v[1], x)) / det};
}

// Carries x from triangle `from` to the congruent triangle `to`.
std::optional<ModelPoint> transfer(Kappa k, const std::array<ModelPoint, 3>& from, const std::array<ModelPoint, 3>& to,
                                   const ModelPoint& x) {
  const auto mu = solve3({lift(k, from[0]), lift(k, from[1]), lift(k, from[2])}, lift(k, x));
  if (!mu) return std::nullopt;
  return unlift(k, lift(k, to[0]) * (*mu)[0] + lift(k, to[1]) * (*mu)[1] + lift(k, to[2]) * (*mu)[2]);
}

Vec3 perpendicular(Kappa k, const ModelPoint& p, const Vec3& u) {
  switch (k.sign()) {
    case 0: return {-u.y, u.x, 0.0};
    case 1: return cross(p.coords, u) * (1.0 / k.radius());
    default: {
      Vec3 v = cross(p.coords, u);
      v.z = -v.z;
      const double n = tangent_norm(k, v);
      return v * (tangent_norm(k, u) / n);
    }
  }
}

// Third vertex c of a triangle on the side of edge ab away from `away`.
ModelPoint place_third(Kappa k, const ModelPoint& a, const ModelPoint& b, double lab, double lac, double lbc,
                       const ModelPoint& away) {
  const double alpha = angle_from_sides(k, lab, lac, lbc);
  const Vec3 u = model_log(k, a, b) * (1.0 / lab);
  const Vec3 w = perpendicular(k, a, u);
  const ModelPoint c1 = model_exp(k, a, (u * std::cos(alpha) + w * std::sin(alpha)) * lac);
  const ModelPoint c2 = model_exp(k, a, (u * std::cos(alpha) - w * std::sin(alpha)) * lac);
  return model_distance(k, c1, away) >= model_distance(k, c2, away) ? c1 : c2;
}

struct Plane2 {
  double x;
  double y;
};

double area2(const Plane2& a, const Plane2& b, const Plane2& c) {
  return (c.x - a.x) * (b.y - a.y) - (b.x - a.x) * (c.y - a.y);
}

struct Apex {
  int id;
  int portal;
};

// Funnel walk over portals (left id, right id); left is counterclockwise.
std::vector<Apex> funnel(const std::vector<Plane2>& pp, const std::vector<std::pair<int, int>>& portals) {
  std::vector<Apex> out;
  int apex = portals[0].first;
  int left = apex;
  int right = apex;
  int apex_i = 0;
  int left_i = 0;
  int right_i = 0;
  out.push_back({apex, 0});
  for (int i = 1; i < static_cast<int>(portals.size()); ++i) {
    const int l = portals[i].first;
    const int r = portals[i].second;
    if (area2(pp[apex], pp[right], pp[r]) <= 0.0) {
      if (apex == right || area2(pp[apex], pp[left], pp[r]) > 0.0) {
        right = r;
        right_i = i;
      } else {
        out.push_back({left, left_i});
        apex = right = left;
        apex_i = right_i = left_i;
        i = apex_i;
        continue;
      }
    }
    if (area2(pp[apex], pp[left], pp[l]) >= 0.0) {
      if (apex == left || area2(pp[apex], pp[right], pp[l]) < 0.0) {
        left = l;
        left_i = i;
      } else {
        out.push_back({right, right_i});
        apex = left = right;
        apex_i = left_i = right_i;
        i = apex_i;
        continue;
      }
    }
  }
  const int end = portals.back().first;
  if (out.back().id != end) out.push_back({end, static_cast<int>(portals.size()) - 1});
  return out;
}

class StripWalker {
 public:
  StripWalker(const SteinerGraph& g, const PolyPoint& a, const PolyPoint& b)
      : g_(g), w_(g.complex()), m_(g.complex().mesh()), k_(g.complex().kappa()), a_(a), b_(b) {}

  struct Taut {
    double length = 0.0;
    std::vector<int> strip;  // after trimming the ends
    PolyPoint a;
    PolyPoint b;
    std::vector<std::array<ModelPoint, 3>> developed;
    std::vector<ModelPoint> points;
    std::vector<int> point_vertex;  // mesh vertex, -1 for the endpoints
    std::vector<Apex> apexes;
  };

  std::optional<Taut> pull(std::vector<int> strip) const { return pull(std::move(strip), a_, b_); }

  std::optional<Taut> pull(std::vector<int> strip, PolyPoint a, PolyPoint b) const {
    trim_front(strip, a);
    std::reverse(strip.begin(), strip.end());
    trim_front(strip, b);
    std::reverse(strip.begin(), strip.end());
    const int n = static_cast<int>(strip.size());
    Taut out;
    std::vector<std::array<int, 3>> ids(n);
    for (int i = 0; i < n; ++i) {
      const int t = strip[i];
      if (w_.triangles()[t].degeneracy != Degeneracy::none) return std::nullopt;
      const Triangle& tri = m_.triangles()[t];
      std::array<ModelPoint, 3> dev{};
      if (i == 0) {
        dev = w_.triangles()[t].vertices;
        for (int k = 0; k < 3; ++k) ids[i][k] = add_point(out, dev[k], tri[k]);
      } else {
        const Triangle& prev = m_.triangles()[strip[i - 1]];
        int third = -1;
        int shared = 0;
        for (int k = 0; k < 3; ++k) {
          const auto it = std::find(prev.begin(), prev.end(), tri[k]);
          if (it == prev.end()) {
            third = k;
            continue;
          }
          const int j = static_cast<int>(it - prev.begin());
          dev[k] = out.developed[i - 1][j];
          ids[i][k] = ids[i - 1][j];
          ++shared;
        }
        if (shared != 2) return std::nullopt;
        const int la = (third + 1) % 3;
        const int lb = (third + 2) % 3;
        int prev_third = 0;
        while (prev[prev_third] == tri[la] || prev[prev_third] == tri[lb]) ++prev_third;
        try {
          dev[third] = place_third(k_, dev[la], dev[lb], length(tri[la], tri[lb]), length(tri[la], tri[third]),
                                   length(tri[lb], tri[third]), out.developed[i - 1][prev_third]);
        } catch (const Error&) {
          return std::nullopt;
        }
        ids[i][third] = add_point(out, dev[third], tri[third]);
      }
      out.developed.push_back(dev);
    }
    const int start = add_point(out, a.chart, -1);
    const auto end_pos = transfer(k_, w_.triangles()[strip.back()].vertices, out.developed.back(), b.chart);
    if (!end_pos) return std::nullopt;
    const int end = add_point(out, *end_pos, -1);

    std::vector<Plane2> pp;
    if (!project(out.points, pp)) return std::nullopt;
    std::vector<std::pair<int, int>> portals{{start, start}};
    for (int i = 1; i < n; ++i) {
      const Triangle& prev = m_.triangles()[strip[i - 1]];
      const Triangle& cur = m_.triangles()[strip[i]];
      std::array<int, 2> edge{};
      int c = -1;
      int found = 0;
      for (int k = 0; k < 3; ++k) {
        if (std::find(cur.begin(), cur.end(), prev[k]) != cur.end()) {
          edge[found++] = ids[i - 1][k];
        } else {
          c = ids[i - 1][k];
        }
      }
      const Plane2& pc = pp[c];
      const double orient = (pp[edge[0]].x - pc.x) * (pp[edge[1]].y - pc.y) - (pp[edge[0]].y - pc.y) * (pp[edge[1]].x - pc.x);
      portals.push_back(orient > 0.0 ? std::pair{edge[1], edge[0]} : std::pair{edge[0], edge[1]});
    }
    portals.push_back({end, end});
    out.apexes = funnel(pp, portals);
    for (std::size_t k = 0; k + 1 < out.apexes.size(); ++k) {
      out.length += model_distance(k_, out.points[out.apexes[k].id], out.points[out.apexes[k + 1].id]);
    }
    out.strip = std::move(strip);
    out.a = a;
    out.b = b;
    return out;
  }

  // Strip with the run of triangles around vertex v (through portal p) sent
  // around the other side of v.
  std::optional<std::vector<int>> reroute(const std::vector<int>& strip, int p, int v) const {
    if (m_.is_boundary(v) || p < 1 || p >= static_cast<int>(strip.size())) return std::nullopt;
    const Support at{Support::vertex, v};
    int i0 = p - 1;
    int i1 = p;
    while (i0 > 0 && contains(m_, strip[i0 - 1], at)) --i0;
    while (i1 + 1 < static_cast<int>(strip.size()) && contains(m_, strip[i1 + 1], at)) ++i1;
    const std::vector<int>& fan = w_.fan(v);
    const int f = static_cast<int>(fan.size());
    auto pos = [&](int t) { return static_cast<int>(std::find(fan.begin(), fan.end(), t) - fan.begin()); };
    const int pos0 = pos(strip[i0]);
    const int pos1 = pos(strip[i1]);
    const int next = pos(strip[i0 + 1]);
    if (pos0 == f || pos1 == f || next == f) return std::nullopt;
    const int step = next == (pos0 + 1) % f ? -1 : 1;
    std::vector<int> out(strip.begin(), strip.begin() + i0 + 1);
    for (int k = pos0; k != pos1;) {
      k = ((k + step) % f + f) % f;
      push(out, fan[k]);
    }
    for (std::size_t i = i1 + 1; i < strip.size(); ++i) push(out, strip[i]);
    return out;
  }

  // First portal of the strip with v on its edge, or -1.
  int portal_at(const std::vector<int>& strip, int v) const {
    const Support at{Support::vertex, v};
    for (int i = 1; i < static_cast<int>(strip.size()); ++i) {
      if (contains(m_, strip[i - 1], at) && contains(m_, strip[i], at)) return i;
    }
    return -1;
  }

  // Appends t, cutting the loop if t is already on the strip.
  static void push(std::vector<int>& strip, int t) {
    const auto it = std::find(strip.begin(), strip.end(), t);
    if (it != strip.end()) {
      strip.erase(it + 1, strip.end());
    } else {
      strip.push_back(t);
    }
  }

  // Triangles from `from` to `to` around vertex v, excluding `from`.
  std::optional<std::vector<int>> around(int v, int from, int to) const {
    const std::vector<int>& fan = w_.fan(v);
    const int f = static_cast<int>(fan.size());
    const int i = static_cast<int>(std::find(fan.begin(), fan.end(), from) - fan.begin());
    const int j = static_cast<int>(std::find(fan.begin(), fan.end(), to) - fan.begin());
    if (i == f || j == f) return std::nullopt;
    std::vector<int> out;
    if (m_.is_boundary(v)) {
      const int step = j > i ? 1 : -1;
      for (int k = i; k != j;) out.push_back(fan[k += step]);
      return out;
    }
    const int forward = ((j - i) % f + f) % f;
    const int step = forward <= f - forward ? 1 : -1;
    for (int k = i; k != j;) {
      k = ((k + step) % f + f) % f;
      out.push_back(fan[k]);
    }
    return out;
  }

  Support support(int node) const {
    const int nv = m_.vertex_count();
    if (node < nv) return {Support::vertex, node};
    return {Support::edge, (node - nv) / g_.refinement()};
  }

  std::optional<ModelPoint> node_chart(int node, int t) const {
    const auto nodes = g_.triangle_nodes(t);
    const auto it = std::find(nodes.begin(), nodes.end(), node);
    if (it == nodes.end()) return std::nullopt;
    return g_.triangle_positions(t)[it - nodes.begin()];
  }

 private:
  double length(int u, int v) const { return w_.edge_lengths()[m_.edge_id(u, v)]; }

  static int add_point(Taut& t, const ModelPoint& p, int vertex) {
    t.points.push_back(p);
    t.point_vertex.push_back(vertex);
    return static_cast<int>(t.points.size()) - 1;
  }

  // Projective chart: the plane itself, Klein coordinates, or the gnomonic
  // projection from the center of the points.
  bool project(const std::vector<ModelPoint>& pts, std::vector<Plane2>& out) const {
    out.clear();
    out.reserve(pts.size());
    switch (k_.sign()) {
      case 0:
        for (const auto& p : pts) out.push_back({p.coords.x, p.coords.y});
        return true;
      case -1:
        for (const auto& p : pts) out.push_back({p.coords.x / p.coords.z, p.coords.y / p.coords.z});
        return true;
      default: {
        Vec3 c{};
        for (const auto& p : pts) c += p.coords;
        const double cn = norm(c);
        if (!(cn > 0.0)) return false;
        c *= 1.0 / cn;
        const Vec3 e1 = cross(c, std::abs(c.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0});
        const Vec3 u = e1 * (1.0 / norm(e1));
        const Vec3 v = cross(c, u);
        for (const auto& p : pts) {
          const double h = dot(p.coords, c);
          if (h < 0.1 * k_.radius()) return false;
          out.push_back({dot(p.coords, u) / h, dot(p.coords, v) / h});
        }
        return true;
      }
    }
  }

  const SteinerGraph& g_;
  const PolyComplex& w_;
  const DiscMesh& m_;
  Kappa k_;
  PolyPoint a_;
  PolyPoint b_;

  // Endpoints on a mesh vertex or on the first portal are moved inward
  // along the strip, so that no portal passes through an endpoint (the
  // funnel degenerates there).
  void trim_front(std::vector<int>& strip, PolyPoint& p) const {
    constexpr double snap = 1e-9;
    for (;;) {
      const auto& chart = w_.triangles()[p.triangle].vertices;
      const Triangle& tri = m_.triangles()[p.triangle];
      const std::array<Vec3, 3> lifted{lift(k_, chart[0]), lift(k_, chart[1]), lift(k_, chart[2])};
      auto mu = solve3(lifted, lift(k_, p.chart));
      if (!mu) return;
      const double total = (*mu)[0] + (*mu)[1] + (*mu)[2];
      if (!(total > 0.0)) return;
      for (double& m : *mu) m /= total;
      for (int k = 0; k < 3; ++k) {
        if ((*mu)[k] < 1.0 - snap) continue;
        const int v = tri[k];
        std::size_t i = strip.size() - 1;
        while (!contains(m_, strip[i], {Support::vertex, v})) --i;
        strip.erase(strip.begin(), strip.begin() + static_cast<std::ptrdiff_t>(i));
        p = at_vertex(strip.front(), v);
        return;
      }
      if (strip.size() < 2) return;
      const Triangle& next = m_.triangles()[strip[1]];
      int k = 0;
      while (k < 3 && std::find(next.begin(), next.end(), tri[k]) != next.end()) ++k;
      if (k == 3 || (*mu)[k] > snap) return;
      // On the portal: develop the next triangle against this chart and
      // carry the point over.
      const int i = (k + 1) % 3;
      const int j = (k + 2) % 3;
      const Vec3 on_edge = lifted[i] * (*mu)[i] + lifted[j] * (*mu)[j];
      std::array<ModelPoint, 3> dev{};
      int third = -1;
      for (int l = 0; l < 3; ++l) {
        if (next[l] == tri[i]) {
          dev[l] = chart[i];
        } else if (next[l] == tri[j]) {
          dev[l] = chart[j];
        } else {
          third = l;
        }
      }
      try {
        dev[third] = place_third(k_, chart[i], chart[j], length(tri[i], tri[j]), length(tri[i], next[third]),
                                 length(tri[j], next[third]), chart[k]);
      } catch (const Error&) {
        return;
      }
      const auto moved = transfer(k_, dev, w_.triangles()[strip[1]].vertices, unlift(k_, on_edge));
      if (!moved) return;
      p = {strip[1], *moved};
      strip.erase(strip.begin());
    }
  }

  PolyPoint at_vertex(int t, int v) const {
    const Triangle& tri = m_.triangles()[t];
    return {t, w_.triangles()[t].vertices[std::find(tri.begin(), tri.end(), v) - tri.begin()]};
  }
};

}  // namespace

PolyPath PolyGeodesics::shortest(const PolyPoint& a, const ShortestPathTree& from_a, const PolyPoint& b) const {
  const PolyComplex& w = graph_.complex();
  const DiscMesh& m = w.mesh();
  const Kappa k = w.kappa();
  if (a.triangle < 0 || a.triangle >= m.triangle_count() || b.triangle < 0 || b.triangle >= m.triangle_count()) {
    throw Error(ErrorCode::invalid_argument, "triangle index out of range");
  }
  StripWalker walker(graph_, a, b);

  int best_node = -1;
  double best = unreachable;
  for (const auto& [node, d] : graph_.attach(b)) {
    if (from_a.dist[node] + d < best) {
      best = from_a.dist[node] + d;
      best_node = node;
    }
  }
  PolyPath path;
  std::vector<int> strip{a.triangle};
  bool strip_ok = true;
  const double direct = a.triangle == b.triangle ? model_distance(k, a.chart, b.chart) : unreachable;
  if (direct <= best) {
    path.pieces.push_back({a.triangle, a.triangle, a.chart, b.chart, 0.0, direct});
    path.length = direct;
  } else {
    if (best_node < 0) throw Error(ErrorCode::not_length_connected, "points are not connected in the complex");
    const std::vector<int> nodes = from_a.path_to(best_node);
    // Path points: a, nodes..., b with the triangle carrying each chord.
    std::vector<Support> sup{{Support::triangle, a.triangle}};
    for (int node : nodes) sup.push_back(walker.support(node));
    sup.push_back({Support::triangle, b.triangle});
    std::vector<ModelPoint> charts;
    for (std::size_t i = 0; i + 1 < sup.size(); ++i) {
      const int cur = strip.back();
      int host = -1;
      if (strip_ok && contains(m, cur, sup[i + 1]) && contains(m, cur, sup[i])) {
        host = cur;
      } else {
        const Support& s = sup[i];
        std::vector<int> options;
        if (s.kind == Support::vertex) {
          options = w.fan(s.id);
        } else if (s.kind == Support::edge) {
          options = m.edge_triangles(s.id);
        } else {
          options = {s.id};
        }
        for (int t : options) {
          if (contains(m, t, sup[i + 1])) {
            host = t;
            break;
          }
        }
        if (host < 0) throw Error(ErrorCode::invalid_argument, "Steiner path leaves its triangles");
        if (strip_ok && host != cur) {
          if (s.kind == Support::vertex) {
            const auto run = walker.around(s.id, cur, host);
            if (!run) {
              strip_ok = false;
            } else {
              for (int t : *run) StripWalker::push(strip, t);
            }
          } else if (s.kind == Support::edge) {
            StripWalker::push(strip, host);
          } else {
            strip_ok = false;
          }
        }
      }
      const ModelPoint from = i == 0 ? a.chart : walker.node_chart(nodes[i - 1], host).value();
      const ModelPoint to = i + 1 == sup.size() - 1 ? b.chart : walker.node_chart(nodes[i], host).value();
      const double len = model_distance(k, from, to);
      path.pieces.push_back({host, host, from, to, path.length, len});
      path.length += len;
    }
    if (strip_ok && strip.back() != b.triangle) strip_ok = false;
  }
  if (!strip_ok || !taut_) return path;

  auto taut = walker.pull(strip);
  if (!taut) return path;
  for (int round = 0; round < max_reroutes; ++round) {
    bool improved = false;
    // All bends at once first: a strip that runs along the wrong side of a
    // row of vertices only shortens when the whole row is crossed.
    std::optional<std::vector<int>> all = taut->strip;
    int moved = 0;
    for (std::size_t i = 1; i + 1 < taut->apexes.size() && all; ++i) {
      const int v = taut->point_vertex[taut->apexes[i].id];
      if (v < 0) continue;
      const int p = walker.portal_at(*all, v);
      if (p < 0) continue;
      if (auto alt = walker.reroute(*all, p, v)) {
        all = std::move(alt);
        ++moved;
      }
    }
    if (moved > 1) {
      auto cand = walker.pull(*all, taut->a, taut->b);
      if (cand && cand->length < taut->length) {
        taut = std::move(cand);
        continue;
      }
    }
    for (std::size_t i = 1; i + 1 < taut->apexes.size() && !improved; ++i) {
      const int v = taut->point_vertex[taut->apexes[i].id];
      if (v < 0) continue;
      const auto alt = walker.reroute(taut->strip, taut->apexes[i].portal, v);
      if (!alt) continue;
      auto cand = walker.pull(*alt, taut->a, taut->b);
      if (cand && cand->length < taut->length) {
        taut = std::move(cand);
        improved = true;
      }
    }
    if (!improved) break;
  }
  if (taut->length > path.length + 1e-9 * (1.0 + path.length)) return path;

  PolyPath out;
  out.taut = true;
  out.strip = taut->strip;
  out.developed = taut->developed;
  const int last = static_cast<int>(out.strip.size()) - 1;
  for (std::size_t i = 0; i + 1 < taut->apexes.size(); ++i) {
    const Apex& p = taut->apexes[i];
    const Apex& q = taut->apexes[i + 1];
    const double len = model_distance(k, taut->points[p.id], taut->points[q.id]);
    out.pieces.push_back({std::max(0, p.portal - 1), std::min(last, q.portal), taut->points[p.id], taut->points[q.id],
                          out.length, len});
    out.length += len;
  }
  if (out.pieces.empty()) out.pieces.push_back({0, 0, a.chart, a.chart, 0.0, 0.0});
  return out;
}

PolyPoint PolyGeodesics::point_at(const PolyPath& path, double arclength) const {
  const Kappa k = graph_.complex().kappa();
  if (path.pieces.empty()) throw Error(ErrorCode::invalid_argument, "empty path");
  const double s = std::clamp(arclength, 0.0, path.length);
  std::size_t i = 0;
  while (i + 1 < path.pieces.size() && path.pieces[i].start + path.pieces[i].length < s) ++i;
  const auto& piece = path.pieces[i];
  const double f = piece.length > 0.0 ? std::clamp((s - piece.start) / piece.length, 0.0, 1.0) : 0.0;
  const ModelPoint x = geodesic_point(k, piece.from, piece.to, f);
  if (!path.taut) return {piece.triangle, x};

  // Locate x in the developed strip and carry it to that triangle's chart.
  int best = piece.triangle;
  double best_score = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best_mu{1.0, 0.0, 0.0};
  for (int j = piece.triangle; j <= piece.last; ++j) {
    const auto& d = path.developed[j];
    const auto mu = solve3({lift(k, d[0]), lift(k, d[1]), lift(k, d[2])}, lift(k, x));
    if (!mu) continue;
    const double total = (*mu)[0] + (*mu)[1] + (*mu)[2];
    if (!(total > 0.0)) continue;
    const double score = std::min({(*mu)[0], (*mu)[1], (*mu)[2]}) / total;
    if (score > best_score) {
      best_score = score;
      best = j;
      best_mu = *mu;
    }
  }
  const auto& chart = graph_.complex().triangles()[path.strip[best]].vertices;
  const ModelPoint c =
      unlift(k, lift(k, chart[0]) * best_mu[0] + lift(k, chart[1]) * best_mu[1] + lift(k, chart[2]) * best_mu[2]);
  return {path.strip[best], c};
}

}  // namespace catdisc
