#include "catdisc/graph_minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <sstream>

#include "catdisc/error.hpp"
#include "catdisc/induced_metric.hpp"
#include "catdisc/parallel.hpp"

namespace catdisc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Vardi-Zhang modified Weiszfeld iteration on a manifold given by log/exp.
// `Tangent` needs +=, * double, and `tnorm`.
template <class Point, class Tangent, class Log, class Exp, class Dist, class TNorm>
Point weiszfeld(std::span<const Point> anchors, std::span<const double> weights, Point x, Log log, Exp exp, Dist dist,
                TNorm tnorm, Tangent zero) {
  double scale = 0.0;
  for (const auto& a : anchors) scale = std::max(scale, dist(x, a));
  if (scale == 0.0) return x;
  auto objective = [&](const Point& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) s += weights[i] * dist(p, anchors[i]);
    return s;
  };
  double fx = objective(x);
  const double coincide = 1e-14 * scale;
  for (int it = 0; it < 1000; ++it) {
    Tangent pull = zero;
    double inv_sum = 0.0;
    double coincident_weight = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const double d = dist(x, anchors[i]);
      if (d <= coincide) {
        coincident_weight += weights[i];
        continue;
      }
      pull += log(x, anchors[i]) * (weights[i] / d);
      inv_sum += weights[i] / d;
    }
    if (inv_sum == 0.0) break;
    const double pull_norm = tnorm(pull);
    Tangent step = pull * (1.0 / inv_sum);
    if (coincident_weight > 0.0) {
      // At an anchor: optimal iff the pull of the rest is at most its weight.
      if (pull_norm <= coincident_weight) break;
      step = step * (1.0 - coincident_weight / pull_norm);
    }
    const double step_norm = tnorm(step);
    Point next = exp(x, step);
    const double fn = objective(next);
    if (!(fn < fx)) break;
    x = next;
    fx = fn;
    if (step_norm <= 1e-15 * scale) break;
  }
  return x;
}

std::vector<double> operator*(std::vector<double> v, double s) {
  for (double& x : v) x *= s;
  return v;
}

std::vector<double>& operator+=(std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

double local_length(const TargetSpace& space, const TargetPoint& x, std::span<const TargetPoint> anchors,
                    std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) s += weights[i] * space.distance(x, anchors[i]);
  return s;
}

}  // namespace

const char* to_string(RelaxMode mode) { return mode == RelaxMode::free ? "free" : "dominated"; }

TargetPoint geodesic_fermat_point(const TargetSpace& space, std::span<const TargetPoint> anchors,
                                  std::span<const double> weights, const TargetPoint& start) {
  if (anchors.empty() || anchors.size() != weights.size()) {
    throw Error(ErrorCode::invalid_argument, "anchors and weights must be nonempty and of equal length");
  }
  switch (space.kind()) {
    case BackendKind::euclidean: {
      using V = std::vector<double>;
      std::vector<V> pts;
      for (const auto& a : anchors) pts.push_back(std::get<EuclideanPoint>(a).x);
      auto dist = [](const V& a, const V& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
      };
      auto log = [](const V& x, const V& a) {
        V t(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] - x[i];
        return t;
      };
      auto exp = [](const V& x, const V& t) {
        V r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + t[i];
        return r;
      };
      auto tnorm = [](const V& t) { return std::sqrt(std::inner_product(t.begin(), t.end(), t.begin(), 0.0)); };
      const V x0 = std::get<EuclideanPoint>(start).x;
      return EuclideanPoint{weiszfeld<V, V>(std::span<const V>(pts), weights, x0, log, exp, dist, tnorm,
                                            V(x0.size(), 0.0))};
    }
    case BackendKind::model: {
      const Kappa k = *space.model_kappa();
      std::vector<ModelPoint> pts;
      for (const auto& a : anchors) pts.push_back(std::get<ModelPoint>(a));
      auto dist = [k](const ModelPoint& a, const ModelPoint& b) { return model_distance(k, a, b); };
      auto log = [k](const ModelPoint& x, const ModelPoint& a) { return model_log(k, x, a); };
      auto exp = [k](const ModelPoint& x, const Vec3& t) { return model_exp(k, x, t); };
      auto tnorm = [k](const Vec3& t) { return tangent_norm(k, t); };
      return weiszfeld<ModelPoint, Vec3>(std::span<const ModelPoint>(pts), weights, std::get<ModelPoint>(start), log,
                                         exp, dist, tnorm, Vec3{});
    }
    case BackendKind::tree: {
      std::vector<TreePoint> pts;
      for (const auto& a : anchors) pts.push_back(std::get<TreePoint>(a));
      return space.as_tree()->minimize_power_sum(pts, weights, 1);
    }
    case BackendKind::cone: {
      std::vector<TargetPoint> directions(anchors.begin(), anchors.end());
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = i + 1; j < anchors.size(); ++j) {
          directions.push_back(space.geodesic(anchors[i], anchors[j], 0.5));
        }
      }
      auto objective = [&](const TargetPoint& x) { return local_length(space, x, anchors, weights); };
      return geodesic_coordinate_search(space, start, directions, objective, 1e-15, 500);
    }
  }
  return start;
}

double total_length(const MappedGraph& mg) {
  CompensatedSum s;
  for (int e = 0; e < mg.mesh->edge_count(); ++e) s.add(mg.edge_length(e));
  return s.value();
}

RelaxResult relax_graph(const MappedGraph& input, const RelaxConfig& cfg) {
  input.validate();
  if (!(cfg.tol_move > 0.0)) throw Error(ErrorCode::invalid_argument, "tol_move must be > 0");
  if (cfg.max_iters < 1) throw Error(ErrorCode::invalid_argument, "max_iters must be >= 1");
  const TargetSpace& space = input.space;
  if (std::isfinite(space.diameter_bound())) {
    std::vector<TargetPoint> fixed_images;
    for (int v : input.fixed_vertices()) fixed_images.push_back(input.images[v]);
    const auto [center, radius] = space.enclosing_ball(fixed_images);
    if (radius >= 0.5 * space.diameter_bound()) {
      throw Error(ErrorCode::out_of_convexity,
                  "fixed images spread over radius " + std::to_string(radius) + " >= R_kappa/2");
    }
  }
  const DiscMesh& mesh = *input.mesh;
  std::vector<int> order = cfg.sweep_order;
  if (order.empty()) {
    order = input.free_vertices();
  } else {
    for (int v : order) {
      if (v < 0 || v >= mesh.vertex_count() || input.is_fixed(v)) {
        throw Error(ErrorCode::invalid_argument, "sweep order may only list free vertices");
      }
    }
  }

  RelaxResult result{input, false, 0, 0, {}};
  MappedGraph& g = result.graph;
  g.edge_polylines.clear();
  const std::vector<double> caps = input.edge_lengths();

  auto neighbor_images = [&](int v) {
    std::vector<TargetPoint> pts;
    for (int w : mesh.neighbors(v)) pts.push_back(g.images[w]);
    return pts;
  };
  auto edge_length_with = [&](int e, int v, const TargetPoint& x) {
    const auto [a, b] = mesh.edges()[e];
    return space.distance(a == v ? x : g.images[a], b == v ? x : g.images[b]);
  };
  auto feasible = [&](int v, const TargetPoint& x) {
    for (int e : mesh.incident_edges(v)) {
      if (edge_length_with(e, v, x) > caps[e]) return false;
    }
    return true;
  };
  auto local_sum = [&](int v, const TargetPoint& x) {
    double s = 0.0;
    for (int e : mesh.incident_edges(v)) s += edge_length_with(e, v, x);
    return s;
  };
  // Candidate position for v given its current neighbors; nullopt if no
  // sufficient improvement.
  auto step = [&](int v) -> std::optional<TargetPoint> {
    const auto nb = neighbor_images(v);
    if (nb.empty()) return std::nullopt;
    const std::vector<double> w(nb.size(), 1.0);
    const TargetPoint& x = g.images[v];
    TargetPoint cand = geodesic_fermat_point(space, nb, w, x);
    if (cfg.mode == RelaxMode::dominated && !feasible(v, cand)) {
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(v, space.geodesic(x, cand, mid)) ? lo : hi) = mid;
      }
      if (lo == 0.0) return std::nullopt;
      cand = space.geodesic(x, cand, lo);
      if (!feasible(v, cand)) return std::nullopt;
    }
    const double old_sum = local_sum(v, x);
    const double new_sum = local_sum(v, cand);
    if (!(new_sum < old_sum - 1e-14 * old_sum)) return std::nullopt;
    return cand;
  };

  result.trace.push_back({0, total_length(g), 0.0});
  int polish_rounds = 0;
  while (result.sweeps < cfg.max_iters) {
    ++result.sweeps;
    double max_move = 0.0;
    for (int v : order) {
      if (auto cand = step(v)) {
        max_move = std::max(max_move, space.distance(g.images[v], *cand));
        g.images[v] = std::move(*cand);
      }
    }
    result.trace.push_back({result.sweeps, total_length(g), max_move});
    if (max_move >= cfg.tol_move) continue;

    // Simultaneous polish from the Gauss-Seidel fixed point.
    if (cfg.mode == RelaxMode::dominated || polish_rounds >= 3) {
      result.converged = true;
      break;
    }
    ++polish_rounds;
    std::vector<TargetPoint> next = g.images;
    for (int v : order) {
      const auto nb = neighbor_images(v);
      if (nb.empty()) continue;
      next[v] = geodesic_fermat_point(space, nb, std::vector<double>(nb.size(), 1.0), g.images[v]);
    }
    MappedGraph trial = g;
    trial.images = std::move(next);
    const double before = result.trace.back().total_length;
    const double after = total_length(trial);
    if (after < before - 1e-14 * before) {
      double polish_move = 0.0;
      for (int v : order) polish_move = std::max(polish_move, space.distance(g.images[v], trial.images[v]));
      g.images = std::move(trial.images);
      ++result.polish_accepted;
      ++result.sweeps;
      result.trace.push_back({result.sweeps, after, polish_move});
      if (polish_move < cfg.tol_move) {
        result.converged = true;
        break;
      }
    } else {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::string relax_trace_csv(const RelaxResult& result) {
  std::ostringstream os;
  os << "sweep,total_length,max_move\n";
  char buf[96];
  for (const auto& row : result.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", row.sweep, row.total_length, row.max_move);
    os << buf;
  }
  return os.str();
}

double edge_geodesic_defect(const MappedGraph& mg, int samples) {
  samples = std::max(samples, 2);
  std::vector<double> defect(mg.mesh->edge_count(), 0.0);
  parallel_for(defect.size(), [&](std::size_t e) {
    const auto [a, b] = mg.mesh->edges()[e];
    std::vector<TargetPoint> line;
    if (!mg.edge_polylines.empty()) {
      line = mg.edge_polylines[e];
    } else {
      for (int k = 0; k < samples; ++k) {
        line.push_back(mg.space.geodesic(mg.images[a], mg.images[b], static_cast<double>(k) / (samples - 1)));
      }
    }
    defect[e] = std::abs(mg.space.curve_length(line) - mg.space.distance(line.front(), line.back()));
  });
  return defect.empty() ? 0.0 : *std::max_element(defect.begin(), defect.end());
}

bool AngleReport::passes(double tolerance) const {
  for (const auto& v : vertices) {
    if (!v.undefined && v.sum < two_pi - tolerance) return false;
  }
  return true;
}

AngleReport vertex_angle_sums(const MappedGraph& mg, double probe_scale) {
  const DiscMesh& mesh = *mg.mesh;
  const TargetSpace& space = mg.space;
  AngleReport rep;
  rep.comparison_kappa = space.curvature_bound().value_or(0.0);
  const Kappa kappa(rep.comparison_kappa);
  if (!(probe_scale > 0.0)) {
    double sum = 0.0;
    int count = 0;
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const double l = mg.edge_length(e);
      if (l > 0.0) {
        sum += l;
        ++count;
      }
    }
    probe_scale = defaults::probe_scale_factor * (count > 0 ? sum / count : 1.0);
  }
  rep.probe_scale = probe_scale;

  const std::vector<int> verts = mg.free_vertices();
  rep.vertices.resize(verts.size());
  parallel_for(verts.size(), [&](std::size_t idx) {
    VertexAngles& va = rep.vertices[idx];
    va.vertex = verts[idx];
    va.neighbors = mesh.cyclic_neighbors(va.vertex);
    const TargetPoint& p = mg.images[va.vertex];
    const std::size_t deg = va.neighbors.size();
    if (deg < 2) {
      va.undefined = true;
      return;
    }
    std::vector<double> len(deg);
    for (std::size_t k = 0; k < deg; ++k) {
      len[k] = space.distance(p, mg.images[va.neighbors[k]]);
      if (len[k] <= defaults::zero_side) va.undefined = true;
    }
    if (va.undefined) return;
    auto probe = [&](std::size_t k, double scale) {
      const double s = std::min(scale, len[k]);
      return std::pair{space.geodesic(p, mg.images[va.neighbors[k]], s / len[k]), s};
    };
    // A boundary-like arc order (no closing pair) only happens on graphs
    // without a triangulation; the cyclic closure is used either way.
    for (std::size_t k = 0; k < deg; ++k) {
      const std::size_t l = (k + 1) % deg;
      double angle[2];
      for (int h = 0; h < 2; ++h) {
        const double scale = h == 0 ? probe_scale : 0.5 * probe_scale;
        const auto [xi, si] = probe(k, scale);
        const auto [xj, sj] = probe(l, scale);
        const double dij = space.distance(xi, xj);
        const double hi = si + sj;
        angle[h] = angle_from_sides(kappa, si, sj, std::clamp(dij, std::abs(si - sj), hi));
      }
      va.angles.push_back(angle[0]);
      va.angles_half.push_back(angle[1]);
      va.non_monotone.push_back(angle[1] > angle[0] + 1e-9 ? 1 : 0);
      va.sum += angle[0];
      va.sum_half += angle[1];
    }
    va.defect = std::max(0.0, two_pi - va.sum);
  });

  rep.min_sum = std::numeric_limits<double>::infinity();
  for (const auto& va : rep.vertices) {
    if (va.undefined) {
      ++rep.undefined_vertices;
      continue;
    }
    rep.min_sum = std::min(rep.min_sum, va.sum);
    rep.max_defect = std::max(rep.max_defect, va.defect);
    rep.non_monotone_pairs += static_cast<int>(std::count(va.non_monotone.begin(), va.non_monotone.end(), 1));
  }
  if (!std::isfinite(rep.min_sum)) rep.min_sum = 0.0;
  return rep;
}

DominanceReport dominates(const MappedGraph& f, const MappedGraph& g) {
  if (f.mesh != g.mesh && (f.mesh->vertex_count() != g.mesh->vertex_count() || f.mesh->edges() != g.mesh->edges())) {
    throw Error(ErrorCode::graph_mismatch, "maps are defined on different graphs");
  }
  if (f.fixed != g.fixed) throw Error(ErrorCode::fixed_set_mismatch, "maps have different fixed sets");
  for (int v : f.fixed_vertices()) {
    if (f.space.distance(f.images[v], g.images[v]) > 1e-12) {
      throw Error(ErrorCode::fixed_set_mismatch, "maps differ on fixed vertex " + std::to_string(v));
    }
  }
  const auto df = all_pairs_shortest_paths(*f.mesh, f.edge_lengths());
  const auto dg = all_pairs_shortest_paths(*g.mesh, g.edge_lengths());
  DominanceReport rep;
  double scale = 0.0;
  for (double d : df) scale = std::max(scale, d);
  const double slack = 1e-9 * std::max(1.0, scale);
  for (std::size_t k = 0; k < df.size(); ++k) {
    rep.max_shortfall = std::max(rep.max_shortfall, dg[k] - df[k]);
    rep.max_gain = std::max(rep.max_gain, df[k] - dg[k]);
  }
  rep.holds = rep.max_shortfall <= slack;
  rep.strict = rep.holds && rep.max_gain > slack;
  return rep;
}

NonBubblingReport non_bubbling_check(const MappedGraph& mg) {
  const DiscMesh& mesh = *mg.mesh;
  const int n = mesh.vertex_count();
  // Group vertices with coincident images (greedy by first member).
  std::vector<int> group(n, -1);
  std::vector<std::vector<int>> groups;
  for (int v = 0; v < n; ++v) {
    if (group[v] >= 0) continue;
    group[v] = static_cast<int>(groups.size());
    groups.push_back({v});
    for (int w = v + 1; w < n; ++w) {
      if (group[w] < 0 && mg.space.distance(mg.images[v], mg.images[w]) <= defaults::image_coincidence) {
        group[w] = group[v];
        groups.back().push_back(w);
      }
    }
  }
  NonBubblingReport rep;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    if (groups[gi].size() < 3) continue;
    ++rep.repeated_points;
    std::vector<char> seen(n, 0);
    for (int v : groups[gi]) seen[v] = 1;
    for (int s = 0; s < n; ++s) {
      if (seen[s]) continue;
      ++rep.components_checked;
      bool touches = false;
      std::vector<int> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        touches = touches || mg.is_fixed(v);
        for (int w : mesh.neighbors(v)) {
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
      }
      if (!touches) ++rep.components_missing_fixed;
    }
  }
  rep.passed = rep.components_missing_fixed == 0;
  return rep;
}

ContainmentReport containment_check(const MappedGraph& mg, double tolerance) {
  std::vector<TargetPoint> fixed_images;
  for (int v : mg.fixed_vertices()) fixed_images.push_back(mg.images[v]);
  const auto [center, radius] = mg.space.enclosing_ball(fixed_images);
  ContainmentReport rep;
  rep.radius = radius;
  rep.max_excess = -radius;
  for (const auto& p : mg.images) rep.max_excess = std::max(rep.max_excess, mg.space.distance(center, p) - radius);
  rep.passed = rep.max_excess <= tolerance;
  return rep;
}

}  // namespace catdisc
