#include "catdisc/target_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "catdisc/defaults.hpp"
#include "catdisc/error.hpp"

namespace catdisc {

namespace {

constexpr double pi = std::numbers::pi;

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

template <class P>
const P& as(const TargetPoint& p, const char* backend) {
  const P* v = std::get_if<P>(&p);
  if (!v) throw Error(ErrorCode::backend_mismatch, std::string("point does not belong to a ") + backend + " space");
  return *v;
}

double wrap_angle(double a, double theta) {
  double r = std::fmod(a, theta);
  if (r < 0.0) r += theta;
  if (r >= theta) r = 0.0;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// MetricTree

MetricTree::MetricTree(std::vector<TreeEdge> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw Error(ErrorCode::invalid_argument, "metric tree needs at least one edge");
  int vmax = 0;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u == e.v) throw Error(ErrorCode::invalid_argument, "bad tree edge endpoints");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::invalid_argument, "tree edge weights must be positive");
    }
    vmax = std::max({vmax, e.u, e.v});
  }
  const int n = vmax + 1;
  if (static_cast<int>(edges_.size()) != n - 1) {
    throw Error(ErrorCode::invalid_argument, "a tree on " + std::to_string(n) + " vertices has " +
                                                 std::to_string(n - 1) + " edges");
  }
  adjacency_.assign(n, {});
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    adjacency_[edges_[i].u].push_back({edges_[i].v, i});
    adjacency_[edges_[i].v].push_back({edges_[i].u, i});
  }
  parent_.assign(n, -1);
  parent_edge_.assign(n, -1);
  level_.assign(n, -1);
  depth_.assign(n, 0.0);
  tin_.assign(n, 0);
  tout_.assign(n, 0);

  // Iterative DFS from vertex 0 with entry/exit times.
  int timer = 0;
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  level_[0] = 0;
  tin_[0] = timer++;
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < adjacency_[v].size()) {
      const auto [w, e] = adjacency_[v][next++];
      if (w == parent_[v] && e == parent_edge_[v]) continue;
      if (level_[w] >= 0) throw Error(ErrorCode::invalid_argument, "tree edges contain a cycle");
      parent_[w] = v;
      parent_edge_[w] = e;
      level_[w] = level_[v] + 1;
      depth_[w] = depth_[v] + edges_[e].weight;
      tin_[w] = timer++;
      stack.push_back({w, 0});
    } else {
      tout_[v] = timer++;
      stack.pop_back();
    }
  }
  for (int v = 0; v < n; ++v) {
    if (level_[v] < 0) throw Error(ErrorCode::invalid_argument, "tree is not connected");
  }
}

TreePoint MetricTree::vertex_point(int v) const {
  if (v < 0 || v >= vertex_count()) throw Error(ErrorCode::invalid_argument, "tree vertex out of range");
  const int e = parent_edge_[v] >= 0 ? parent_edge_[v] : adjacency_[v].front().second;
  return TreePoint{e, edges_[e].u == v ? 0.0 : edges_[e].weight};
}

int MetricTree::edge_between(int a, int b) const {
  for (const auto& [w, e] : adjacency_.at(a)) {
    if (w == b) return e;
  }
  throw Error(ErrorCode::invalid_argument, "vertices are not adjacent in the tree");
}

TreePoint MetricTree::point_on(int from, int to, double offset) const {
  const int e = edge_between(from, to);
  const double w = edges_[e].weight;
  offset = std::clamp(offset, 0.0, w);
  return TreePoint{e, edges_[e].u == from ? offset : w - offset};
}

int MetricTree::lca(int a, int b) const {
  while (level_[a] > level_[b]) a = parent_[a];
  while (level_[b] > level_[a]) b = parent_[b];
  while (a != b) {
    a = parent_[a];
    b = parent_[b];
  }
  return a;
}

double MetricTree::vertex_distance(int a, int b) const {
  const int c = lca(a, b);
  return depth_[a] + depth_[b] - 2.0 * depth_[c];
}

std::vector<int> MetricTree::vertex_path(int a, int b) const {
  const int c = lca(a, b);
  std::vector<int> up;
  for (int v = a; v != c; v = parent_[v]) up.push_back(v);
  up.push_back(c);
  std::vector<int> down;
  for (int v = b; v != c; v = parent_[v]) down.push_back(v);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

void MetricTree::validate(const TreePoint& p) const {
  if (p.edge < 0 || p.edge >= edge_count()) throw Error(ErrorCode::invalid_point, "tree edge id out of range");
  const double w = edges_[p.edge].weight;
  if (!(p.offset >= -1e-12 * w && p.offset <= w * (1.0 + 1e-12))) {
    throw Error(ErrorCode::invalid_point, "tree offset outside its edge");
  }
}

double MetricTree::distance(const TreePoint& p, const TreePoint& q) const {
  validate(p);
  validate(q);
  if (p.edge == q.edge) return std::abs(p.offset - q.offset);
  const TreeEdge& ep = edges_[p.edge];
  const TreeEdge& eq = edges_[q.edge];
  const std::array<std::pair<int, double>, 2> pe{{{ep.u, p.offset}, {ep.v, ep.weight - p.offset}}};
  const std::array<std::pair<int, double>, 2> qe{{{eq.u, q.offset}, {eq.v, eq.weight - q.offset}}};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [x, dx] : pe) {
    for (const auto& [y, dy] : qe) best = std::min(best, dx + vertex_distance(x, y) + dy);
  }
  return best;
}

TreePoint MetricTree::geodesic(const TreePoint& p, const TreePoint& q, double t) const {
  validate(p);
  validate(q);
  if (t <= 0.0) return p;
  if (t >= 1.0) return q;
  if (p.edge == q.edge) return TreePoint{p.edge, p.offset + t * (q.offset - p.offset)};

  const TreeEdge& ep = edges_[p.edge];
  const TreeEdge& eq = edges_[q.edge];
  // Pick the exit/entry endpoints realizing the distance.
  int bx = -1;
  int by = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int x : {ep.u, ep.v}) {
    const double dx = x == ep.u ? p.offset : ep.weight - p.offset;
    for (int y : {eq.u, eq.v}) {
      const double dy = y == eq.u ? q.offset : eq.weight - q.offset;
      const double d = dx + vertex_distance(x, y) + dy;
      if (d < best) {
        best = d;
        bx = x;
        by = y;
      }
    }
  }
  double remaining = t * best;

  // Leg along p's edge.
  const double exit_offset = bx == ep.u ? 0.0 : ep.weight;
  const double leg0 = std::abs(exit_offset - p.offset);
  if (remaining <= leg0) {
    return TreePoint{p.edge, p.offset + (exit_offset > p.offset ? remaining : -remaining)};
  }
  remaining -= leg0;

  const std::vector<int> path = vertex_path(bx, by);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const int e = edge_between(path[i], path[i + 1]);
    const double w = edges_[e].weight;
    if (remaining <= w) return point_on(path[i], path[i + 1], remaining);
    remaining -= w;
  }

  const double entry_offset = by == eq.u ? 0.0 : eq.weight;
  const double leg1 = std::abs(q.offset - entry_offset);
  remaining = std::min(remaining, leg1);
  return TreePoint{q.edge, entry_offset + (q.offset > entry_offset ? remaining : -remaining)};
}

bool MetricTree::in_subtree(const TreePoint& p, int child) const {
  const TreeEdge& e = edges_[p.edge];
  const int deeper = level_[e.u] > level_[e.v] ? e.u : e.v;
  return tin_[child] <= tin_[deeper] && tout_[deeper] <= tout_[child];
}

TreePoint MetricTree::minimize_power_sum(std::span<const TreePoint> points, std::span<const double> weights,
                                         int power) const {
  if (points.empty() || points.size() != weights.size()) {
    throw Error(ErrorCode::invalid_argument, "points and weights must be nonempty and of equal length");
  }
  if (power != 1 && power != 2) throw Error(ErrorCode::invalid_argument, "power must be 1 or 2");
  for (const auto& p : points) validate(p);

  TreePoint best_point = points.front();
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> centers(points.size());  // (c_i, w_i)
  for (int e = 0; e < edge_count(); ++e) {
    const TreeEdge& edge = edges_[e];
    const int child = level_[edge.u] > level_[edge.v] ? edge.u : edge.v;
    const TreePoint at_u{e, 0.0};
    const TreePoint at_v{e, edge.weight};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const TreePoint& p = points[i];
      double c;
      if (p.edge == e) {
        c = p.offset;
      } else {
        const bool child_side = in_subtree(p, child);
        const bool u_side = child_side == (child == edge.u);
        c = u_side ? -distance(at_u, p) : edge.weight + distance(at_v, p);
      }
      centers[i] = {c, weights[i]};
    }
    double o;
    if (power == 2) {
      double sw = 0.0;
      double swc = 0.0;
      for (const auto& [c, w] : centers) {
        sw += w;
        swc += w * c;
      }
      o = std::clamp(swc / sw, 0.0, edge.weight);
    } else {
      std::sort(centers.begin(), centers.end());
      const double total = std::accumulate(centers.begin(), centers.end(), 0.0,
                                           [](double s, const auto& cw) { return s + cw.second; });
      double acc = 0.0;
      o = centers.back().first;
      for (const auto& [c, w] : centers) {
        acc += w;
        if (acc >= 0.5 * total) {
          o = c;
          break;
        }
      }
      o = std::clamp(o, 0.0, edge.weight);
    }
    double value = 0.0;
    for (const auto& [c, w] : centers) {
      const double d = std::abs(o - c);
      value += power == 2 ? w * d * d : w * d;
    }
    if (value < best_value) {
      best_value = value;
      best_point = TreePoint{e, o};
    }
  }
  return best_point;
}

// ---------------------------------------------------------------------------
// TargetSpace

const char* to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::model: return "model";
    case BackendKind::euclidean: return "euclidean";
    case BackendKind::tree: return "tree";
    case BackendKind::cone: return "cone";
  }
  return "unknown";
}

TargetSpace TargetSpace::model(double kappa) { return TargetSpace(ModelBackend{Kappa(kappa)}); }

TargetSpace TargetSpace::euclidean(int dim) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "euclidean dimension must be >= 1");
  return TargetSpace(EuclideanBackend{dim});
}

TargetSpace TargetSpace::tree(std::vector<TreeEdge> edges) { return TargetSpace(MetricTree(std::move(edges))); }

TargetSpace TargetSpace::cone(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(ErrorCode::invalid_argument, "cone angle must be > 0");
  return TargetSpace(ConeBackend{theta});
}

BackendKind TargetSpace::kind() const {
  return std::visit(overloaded{[](const ModelBackend&) { return BackendKind::model; },
                               [](const EuclideanBackend&) { return BackendKind::euclidean; },
                               [](const MetricTree&) { return BackendKind::tree; },
                               [](const ConeBackend&) { return BackendKind::cone; }},
                    *backend_);
}

std::string TargetSpace::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const ModelBackend& b) { os << "Model(" << b.kappa.value() << ")"; },
                        [&](const EuclideanBackend& b) { os << "EuclideanN(" << b.dim << ")"; },
                        [&](const MetricTree& t) { os << "MetricTree(" << t.edge_count() << " edges)"; },
                        [&](const ConeBackend& c) { os << "FlatCone(" << c.theta << ")"; }},
             *backend_);
  return os.str();
}

std::optional<double> TargetSpace::curvature_bound() const {
  return std::visit(overloaded{[](const ModelBackend& b) -> std::optional<double> { return b.kappa.value(); },
                               [](const EuclideanBackend&) -> std::optional<double> { return 0.0; },
                               [](const MetricTree&) -> std::optional<double> { return 0.0; },
                               [](const ConeBackend& c) -> std::optional<double> {
                                 if (c.theta >= 2.0 * pi) return 0.0;
                                 return std::nullopt;
                               }},
                    *backend_);
}

double TargetSpace::diameter_bound() const {
  if (const auto* m = std::get_if<ModelBackend>(backend_.get())) return m->kappa.diameter_bound();
  return std::numeric_limits<double>::infinity();
}

const Kappa* TargetSpace::model_kappa() const {
  const auto* m = std::get_if<ModelBackend>(backend_.get());
  return m ? &m->kappa : nullptr;
}

int TargetSpace::euclidean_dim() const {
  const auto* e = std::get_if<EuclideanBackend>(backend_.get());
  return e ? e->dim : 0;
}

const MetricTree* TargetSpace::as_tree() const { return std::get_if<MetricTree>(backend_.get()); }

double TargetSpace::cone_angle() const {
  const auto* c = std::get_if<ConeBackend>(backend_.get());
  return c ? c->theta : 0.0;
}

void TargetSpace::validate(const TargetPoint& p) const {
  std::visit(overloaded{[&](const ModelBackend& b) { validate_point(b.kappa, as<ModelPoint>(p, "model")); },
                        [&](const EuclideanBackend& b) {
                          const auto& e = as<EuclideanPoint>(p, "euclidean");
                          if (static_cast<int>(e.x.size()) != b.dim) {
                            throw Error(ErrorCode::invalid_point, "euclidean point has wrong dimension");
                          }
                        },
                        [&](const MetricTree& t) { t.validate(as<TreePoint>(p, "tree")); },
                        [&](const ConeBackend& c) {
                          const auto& cp = as<ConePoint>(p, "cone");
                          if (!(cp.radius >= 0.0) || !std::isfinite(cp.angle) || cp.angle < 0.0 ||
                              cp.angle >= c.theta) {
                            throw Error(ErrorCode::invalid_point, "cone point needs radius >= 0, angle in [0, theta)");
                          }
                        }},
             *backend_);
}

namespace {

// Angular gap between two cone directions and the orientation of the short
// way from a to b (+1 increasing, -1 decreasing); `tie` marks equal gaps.
struct ConeGap {
  double gap;
  int orientation;
  bool tie;
};

ConeGap cone_gap(double a, double b, double theta) {
  const double forward = wrap_angle(b - a, theta);
  const double backward = theta - forward;
  if (forward < backward) return {forward, +1, false};
  if (backward < forward) return {backward, -1, false};
  // Tie: traverse without crossing the angle-0 seam (through the smaller angles).
  return {forward, a <= b ? +1 : -1, true};
}

double cone_distance(const ConePoint& p, const ConePoint& q, double theta) {
  if (p.radius == 0.0 || q.radius == 0.0) return p.radius + q.radius;
  const double gap = cone_gap(p.angle, q.angle, theta).gap;
  if (gap >= pi) return p.radius + q.radius;
  const double s = std::sin(0.5 * gap);
  const double dr = p.radius - q.radius;
  return std::sqrt(dr * dr + 4.0 * p.radius * q.radius * s * s);
}

GeodesicResult cone_geodesic(const ConePoint& p, const ConePoint& q, double t, double theta) {
  if (t <= 0.0) return {p, true};
  if (t >= 1.0) return {q, true};
  const ConeGap g = (p.radius == 0.0 || q.radius == 0.0) ? ConeGap{pi, 1, false} : cone_gap(p.angle, q.angle, theta);
  if (g.gap >= pi) {
    const double total = p.radius + q.radius;
    const double s = t * total;
    if (s <= p.radius) return {ConePoint{p.radius - s, p.radius - s == 0.0 ? 0.0 : p.angle}, true};
    return {ConePoint{s - p.radius, q.angle}, true};
  }
  // Unfold: p on the positive x-axis, q at angle `gap`.
  const double px = p.radius;
  const double qx = q.radius * std::cos(g.gap);
  const double qy = q.radius * std::sin(g.gap);
  const double x = px + t * (qx - px);
  const double y = t * qy;
  const double rho = std::hypot(x, y);
  const double psi = std::atan2(y, x);
  return {ConePoint{rho, rho == 0.0 ? 0.0 : wrap_angle(p.angle + g.orientation * psi, theta)}, !g.tie};
}

}  // namespace

double TargetSpace::distance(const TargetPoint& p, const TargetPoint& q) const {
  return std::visit(
      overloaded{[&](const ModelBackend& b) {
                   return model_distance(b.kappa, as<ModelPoint>(p, "model"), as<ModelPoint>(q, "model"));
                 },
                 [&](const EuclideanBackend& b) {
                   validate(p);
                   validate(q);
                   const auto& a = std::get<EuclideanPoint>(p).x;
                   const auto& c = std::get<EuclideanPoint>(q).x;
                   double s = 0.0;
                   for (int i = 0; i < b.dim; ++i) s += (a[i] - c[i]) * (a[i] - c[i]);
                   return std::sqrt(s);
                 },
                 [&](const MetricTree& t) { return t.distance(as<TreePoint>(p, "tree"), as<TreePoint>(q, "tree")); },
                 [&](const ConeBackend& c) {
                   validate(p);
                   validate(q);
                   return cone_distance(std::get<ConePoint>(p), std::get<ConePoint>(q), c.theta);
                 }},
      *backend_);
}

GeodesicResult TargetSpace::geodesic_checked(const TargetPoint& p, const TargetPoint& q, double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::invalid_argument, "geodesic parameter must lie in [0, 1]");
  return std::visit(
      overloaded{[&](const ModelBackend& b) -> GeodesicResult {
                   const auto& a = as<ModelPoint>(p, "model");
                   const auto& c = as<ModelPoint>(q, "model");
                   if (b.kappa.sign() > 0 && t > 0.0 && t < 1.0) {
                     const double d = model_distance(b.kappa, a, c);
                     if (b.kappa.diameter_bound() - d < 1e-9 * b.kappa.radius()) {
                       // Antipodes: leave p along the axis most orthogonal to it.
                       const Vec3& x = a.coords;
                       Vec3 axis{1.0, 0.0, 0.0};
                       if (std::abs(x.y) < std::abs(x.x) && std::abs(x.y) <= std::abs(x.z)) axis = {0.0, 1.0, 0.0};
                       if (std::abs(x.z) < std::abs(x.x) && std::abs(x.z) < std::abs(x.y)) axis = {0.0, 0.0, 1.0};
                       const double r2 = b.kappa.radius() * b.kappa.radius();
                       const Vec3 u = axis - x * (dot(x, axis) / r2);
                       return {model_exp(b.kappa, a, u * (t * d / norm(u))), false};
                     }
                   }
                   return {geodesic_point(b.kappa, a, c, t), true};
                 },
                 [&](const EuclideanBackend& b) -> GeodesicResult {
                   validate(p);
                   validate(q);
                   const auto& a = std::get<EuclideanPoint>(p).x;
                   const auto& c = std::get<EuclideanPoint>(q).x;
                   if (t == 0.0) return {p, true};
                   if (t == 1.0) return {q, true};
                   EuclideanPoint r{std::vector<double>(b.dim)};
                   for (int i = 0; i < b.dim; ++i) r.x[i] = a[i] + t * (c[i] - a[i]);
                   return {r, true};
                 },
                 [&](const MetricTree& tr) -> GeodesicResult {
                   return {tr.geodesic(as<TreePoint>(p, "tree"), as<TreePoint>(q, "tree"), t), true};
                 },
                 [&](const ConeBackend& c) -> GeodesicResult {
                   validate(p);
                   validate(q);
                   return cone_geodesic(std::get<ConePoint>(p), std::get<ConePoint>(q), t, c.theta);
                 }},
      *backend_);
}

double TargetSpace::curve_length(std::span<const TargetPoint> polyline) const {
  double total = 0.0;
  for (std::size_t i = 1; i < polyline.size(); ++i) total += distance(polyline[i - 1], polyline[i]);
  return total;
}

std::pair<TargetPoint, double> TargetSpace::enclosing_ball(std::span<const TargetPoint> points) const {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "empty point set");
  std::vector<TargetPoint> centers(points.begin(), points.end());
  double diam = -1.0;
  std::size_t fi = 0;
  std::size_t fj = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(points[i], points[j]);
      if (d > diam) {
        diam = d;
        fi = i;
        fj = j;
      }
    }
  }
  if (diam > 0.0) centers.push_back(geodesic(points[fi], points[fj], 0.5));
  TargetPoint best = centers.front();
  double best_radius = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) {
    double r = 0.0;
    for (const auto& p : points) r = std::max(r, distance(c, p));
    if (r < best_radius) {
      best_radius = r;
      best = c;
    }
  }
  return {best, best_radius};
}

TargetPoint geodesic_coordinate_search(const TargetSpace& space, const TargetPoint& start,
                                       std::span<const TargetPoint> directions,
                                       const std::function<double(const TargetPoint&)>& objective, double tol,
                                       int max_rounds) {
  constexpr double golden = 0.6180339887498949;
  TargetPoint x = start;
  double fx = objective(x);
  for (int round = 0; round < max_rounds; ++round) {
    bool improved = false;
    for (const auto& y : directions) {
      if (space.distance(x, y) == 0.0) continue;
      auto g = [&](double t) { return objective(space.geodesic(x, y, t)); };
      double lo = 0.0;
      double hi = 1.0;
      double m1 = hi - golden * (hi - lo);
      double m2 = lo + golden * (hi - lo);
      double g1 = g(m1);
      double g2 = g(m2);
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        if (g1 <= g2) {
          hi = m2;
          m2 = m1;
          g2 = g1;
          m1 = hi - golden * (hi - lo);
          g1 = g(m1);
        } else {
          lo = m1;
          m1 = m2;
          g1 = g2;
          m2 = lo + golden * (hi - lo);
          g2 = g(m2);
        }
      }
      double tbest = 0.5 * (lo + hi);
      double gbest = g(tbest);
      if (g(1.0) < gbest) {
        tbest = 1.0;
        gbest = g(1.0);
      }
      if (gbest < fx - tol * std::max(1.0, std::abs(fx))) {
        x = space.geodesic(x, y, tbest);
        fx = gbest;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return x;
}

TargetPoint TargetSpace::local_barycenter(std::span<const TargetPoint> points, std::span<const double> weights) const {
  if (points.empty() || points.size() != weights.size()) {
    throw Error(ErrorCode::invalid_argument, "points and weights must be nonempty and of equal length");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw Error(ErrorCode::invalid_argument, "barycenter weights must be positive");
  }
  for (const auto& p : points) validate(p);
  if (std::isfinite(diameter_bound())) {
    const auto [center, radius] = enclosing_ball(points);
    if (radius >= 0.5 * diameter_bound()) {
      throw Error(ErrorCode::out_of_convexity, "points spread over a ball of radius " + std::to_string(radius) +
                                                   " >= R_kappa/2");
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);

  return std::visit(
      overloaded{
          [&](const ModelBackend& b) -> TargetPoint {
            const Kappa k = b.kappa;
            if (k.sign() == 0) {
              Vec3 m{};
              for (std::size_t i = 0; i < points.size(); ++i) m += std::get<ModelPoint>(points[i]).coords * weights[i];
              return ModelPoint{m * (1.0 / total)};
            }
            ModelPoint x = std::get<ModelPoint>(points.front());
            double scale = 0.0;
            for (const auto& p : points) scale = std::max(scale, model_distance(k, x, std::get<ModelPoint>(p)));
            for (int it = 0; it < defaults::barycenter_max_iters; ++it) {
              Vec3 step{};
              for (std::size_t i = 0; i < points.size(); ++i) {
                step += model_log(k, x, std::get<ModelPoint>(points[i])) * (weights[i] / total);
              }
              x = model_exp(k, x, step);
              if (tangent_norm(k, step) <= defaults::barycenter_tolerance * std::max(1.0, scale)) break;
            }
            return x;
          },
          [&](const EuclideanBackend& b) -> TargetPoint {
            EuclideanPoint m{std::vector<double>(b.dim, 0.0)};
            for (std::size_t i = 0; i < points.size(); ++i) {
              const auto& x = std::get<EuclideanPoint>(points[i]).x;
              for (int d = 0; d < b.dim; ++d) m.x[d] += weights[i] * x[d];
            }
            for (double& v : m.x) v /= total;
            return m;
          },
          [&](const MetricTree& t) -> TargetPoint {
            std::vector<TreePoint> tp;
            tp.reserve(points.size());
            for (const auto& p : points) tp.push_back(std::get<TreePoint>(p));
            return t.minimize_power_sum(tp, weights, 2);
          },
          [&](const ConeBackend&) -> TargetPoint {
            auto energy = [&](const TargetPoint& x) {
              double e = 0.0;
              for (std::size_t i = 0; i < points.size(); ++i) {
                const double d = distance(x, points[i]);
                e += weights[i] * d * d;
              }
              return e;
            };
            TargetPoint start = points.front();
            for (const auto& p : points) {
              if (energy(p) < energy(start)) start = p;
            }
            return geodesic_coordinate_search(*this, start, points, energy, 1e-15, 2000);
          }},
      *backend_);
}

}  // namespace catdisc
