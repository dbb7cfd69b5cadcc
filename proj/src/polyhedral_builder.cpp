#include "catdisc/polyhedral_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <queue>

#include "catdisc/error.hpp"
#include "catdisc/induced_metric.hpp"
#include "catdisc/parallel.hpp"
#include "catdisc/poly_geodesic.hpp"
#include "catdisc/rng.hpp"

namespace catdisc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int loop_points = 8;

int local_index(const Triangle& tri, int v) {
  return static_cast<int>(std::find(tri.begin(), tri.end(), v) - tri.begin());
}

double mean_edge_length(const PolyComplex& w) {
  double sum = 0.0;
  int count = 0;
  for (double l : w.edge_lengths()) {
    if (l > 0.0) {
      sum += l;
      ++count;
    }
  }
  return count > 0 ? sum / count : 1.0;
}

// Point at fraction f from u toward v on mesh edge {u, v}.
PolyPoint edge_point(const PolyComplex& w, int u, int v, double f) {
  const DiscMesh& m = w.mesh();
  const int t = m.edge_triangles(m.edge_id(u, v)).front();
  const Triangle& tri = m.triangles()[t];
  std::array<double, 3> weights{};
  weights[local_index(tri, u)] = 1.0 - f;
  weights[local_index(tri, v)] = f;
  return poly_point(w, t, weights);
}

}  // namespace

TargetPoint DiscreteMapPair::image(const MappedGraph& mg, int triangle, const std::array<double, 3>& weights) const {
  const double total = weights[0] + weights[1] + weights[2];
  if (!(total > 0.0) || weights[0] < 0.0 || weights[1] < 0.0 || weights[2] < 0.0) {
    throw Error(ErrorCode::invalid_argument, "barycentric weights must be >= 0 with positive sum");
  }
  const Triangle& tri = mg.mesh->triangles()[triangle];
  const double w1 = weights[1] / total;
  const double w2 = weights[2] / total;
  const double far = w1 + w2;
  if (far <= 0.0) return mg.images[tri[0]];
  const TargetPoint opposite = mg.space.geodesic(mg.images[tri[1]], mg.images[tri[2]], w2 / far);
  return mg.space.geodesic(mg.images[tri[0]], opposite, std::min(far, 1.0));
}

BuiltDisc build_polyhedral_disc(const MappedGraph& mg, Kappa kappa, const BuildOptions& options) {
  mg.validate();
  const DiscMesh& mesh = *mg.mesh;
  if (!mesh.has_triangulation()) throw Error(ErrorCode::invalid_mesh, "the polyhedral disc needs a triangulation");
  if (options.q_grid < 1) throw Error(ErrorCode::invalid_argument, "q grid must be >= 1");
  std::vector<double> lengths = mg.edge_lengths();

  double largest = 0.0;
  for (double l : lengths) largest = std::max(largest, l);
  const double epsilon = options.epsilon.value_or(largest);
  if (kappa.sign() > 0 && !(epsilon < 0.5 * kappa.diameter_bound())) {
    throw Error(ErrorCode::epsilon_bound,
                "epsilon " + std::to_string(epsilon) + " is not below R_kappa / 2 = " +
                    std::to_string(0.5 * kappa.diameter_bound()));
  }
  const double allowed = epsilon * (1.0 + 1e-12);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Triangle& tri = mesh.triangles()[t];
    for (int s = 0; s < 3; ++s) {
      const double l = lengths[mesh.edge_id(tri[s], tri[(s + 1) % 3])];
      if (l > allowed) {
        throw Error(ErrorCode::epsilon_bound, "triangle " + std::to_string(t) + " has an image side " +
                                                  std::to_string(l) + " above epsilon " + std::to_string(epsilon));
      }
    }
  }

  BuiltDisc out{PolyComplex::glue(mg.mesh, std::move(lengths), kappa), {}, epsilon, kappa.value()};
  DiscreteMapPair& maps = out.maps;
  maps.grid_size = options.q_grid;
  maps.vertex_points.reserve(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) maps.vertex_points.push_back(vertex_poly_point(out.complex, v));

  const int g = options.q_grid;
  maps.samples.resize(mesh.triangle_count());
  parallel_for(maps.samples.size(), [&](std::size_t t) {
    auto& row = maps.samples[t];
    for (int i = 0; i <= g; ++i) {
      for (int j = 0; i + j <= g; ++j) {
        const std::array<int, 3> wi{i, j, g - i - j};
        const std::array<double, 3> wd{static_cast<double>(wi[0]), static_cast<double>(wi[1]),
                                       static_cast<double>(wi[2])};
        row.push_back({wi, poly_point(out.complex, static_cast<int>(t), wd),
                       maps.image(mg, static_cast<int>(t), wd)});
      }
    }
  });
  return out;
}

AngleReport interior_angle_check(const PolyComplex& w) {
  AngleReport rep;
  rep.comparison_kappa = w.kappa().value();
  std::vector<int> first_member(w.vertex_count(), -1);
  for (int v = 0; v < w.mesh().vertex_count(); ++v) {
    int& f = first_member[w.vertex_class()[v]];
    if (f < 0) f = v;
  }
  rep.min_sum = std::numeric_limits<double>::infinity();
  for (int c = 0; c < w.vertex_count(); ++c) {
    if (w.is_boundary_vertex(c)) continue;
    VertexAngles va;
    va.vertex = first_member[c];
    for (const auto& [t, local] : w.link(c)) {
      const double a = w.triangles()[t].angles[local];
      va.neighbors.push_back(t);
      va.angles.push_back(a);
      va.sum += a;
    }
    va.sum_half = va.sum;
    va.angles_half = va.angles;
    va.non_monotone.assign(va.angles.size(), 0);
    va.defect = std::max(0.0, two_pi - va.sum);
    rep.min_sum = std::min(rep.min_sum, va.sum);
    rep.max_defect = std::max(rep.max_defect, va.defect);
    rep.vertices.push_back(std::move(va));
  }
  if (!std::isfinite(rep.min_sum)) rep.min_sum = 0.0;
  return rep;
}

SideCoherenceReport side_coherence_check(const PolyComplex& w, const MappedGraph& mg, double tolerance) {
  const QuotientMetric qm = induced_length_metric(mg);
  const DiscMesh& mesh = w.mesh();
  SideCoherenceReport rep;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const Triangle& tri = mesh.triangles()[t];
    const auto& sides = w.triangles()[t].sides;
    const std::array<std::pair<int, int>, 3> corners{{{0, 1}, {0, 2}, {1, 2}}};
    for (int s = 0; s < 3; ++s) {
      const double d = qm.vertex_distance(tri[corners[s].first], tri[corners[s].second]);
      rep.max_error = std::max(rep.max_error, std::abs(sides[s] - d));
    }
  }
  rep.passed = rep.max_error <= tolerance;
  return rep;
}

CornerComparisonReport corner_angle_comparison(const PolyComplex& w, const MappedGraph& mg, double probe_scale,
                                               double slack) {
  const DiscMesh& mesh = w.mesh();
  const Kappa kappa = w.kappa();
  CornerComparisonReport rep;
  rep.probe_scale = probe_scale > 0.0 ? probe_scale : defaults::probe_scale_factor * mean_edge_length(w);
  std::vector<double> margins(mesh.triangle_count(), std::numeric_limits<double>::infinity());
  std::vector<int> counts(mesh.triangle_count(), 0);
  parallel_for(margins.size(), [&](std::size_t t) {
    const auto& ct = w.triangles()[t];
    if (ct.degeneracy == Degeneracy::collapsed || ct.degeneracy == Degeneracy::point) return;
    const Triangle& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      const TargetPoint& p = mg.images[tri[i]];
      const TargetPoint& a = mg.images[tri[(i + 1) % 3]];
      const TargetPoint& b = mg.images[tri[(i + 2) % 3]];
      const double la = mg.space.distance(p, a);
      const double lb = mg.space.distance(p, b);
      if (la <= defaults::zero_side || lb <= defaults::zero_side) continue;
      const double sa = std::min(rep.probe_scale, la);
      const double sb = std::min(rep.probe_scale, lb);
      const TargetPoint xa = mg.space.geodesic(p, a, sa / la);
      const TargetPoint xb = mg.space.geodesic(p, b, sb / lb);
      const double d = std::clamp(mg.space.distance(xa, xb), std::abs(sa - sb), sa + sb);
      const double measured = angle_from_sides(kappa, sa, sb, d);
      margins[t] = std::min(margins[t], ct.angles[i] - measured);
      ++counts[t];
    }
  });
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < margins.size(); ++t) {
    rep.corners += counts[t];
    if (margins[t] < rep.worst_margin) {
      rep.worst_margin = margins[t];
      rep.worst_triangle = static_cast<int>(t);
    }
  }
  if (rep.corners == 0) rep.worst_margin = 0.0;
  rep.passed = rep.worst_margin >= -slack;
  return rep;
}

LipschitzReport lipschitz_check(const DiscreteMapPair& maps, const PolyComplex& w, const MappedGraph& mg, int pairs,
                                std::uint64_t seed, int refinement, double slack) {
  LipschitzReport rep;
  rep.slack = slack;
  const DiscMesh& mesh = w.mesh();

  for (int e = 0; e < mesh.edge_count(); ++e) {
    double image_length = mg.edge_length(e);
    if (!mg.edge_polylines.empty() && !mg.edge_polylines[e].empty()) {
      image_length = mg.space.curve_length(mg.edge_polylines[e]);
    }
    rep.max_edge_shortfall = std::max(rep.max_edge_shortfall, w.edge_lengths()[e] - image_length);
    ++rep.edges_checked;
  }

  constexpr int per_source = 20;
  const int sources = std::max(1, (pairs + per_source - 1) / per_source);
  struct Pick {
    int triangle;
    int sample;
  };
  Rng rng(seed);
  std::vector<std::vector<Pick>> picks(sources);
  int remaining = pairs;
  for (auto& group : picks) {
    const int count = 1 + std::min(per_source, remaining);
    remaining -= count - 1;
    for (int k = 0; k < count; ++k) {
      const int t = static_cast<int>(rng.index(mesh.triangle_count()));
      group.push_back({t, static_cast<int>(rng.index(maps.samples[t].size()))});
    }
  }

  const SteinerGraph graph(w, refinement);
  const PolyGeodesics geo(graph);
  std::vector<double> worst(sources, 0.0);
  std::vector<int> counted(sources, 0);
  parallel_for(picks.size(), [&](std::size_t s) {
    const auto& group = picks[s];
    const auto& a = maps.samples[group[0].triangle][group[0].sample];
    const ShortestPathTree tree = graph.from(a.point);
    for (std::size_t k = 1; k < group.size(); ++k) {
      const auto& b = maps.samples[group[k].triangle][group[k].sample];
      const double dw = geo.shortest(a.point, tree, b.point).length;
      const double dy = mg.space.distance(a.image, b.image);
      ++counted[s];
      if (dw <= defaults::zero_side) {
        if (dy > 1e-9) worst[s] = std::numeric_limits<double>::infinity();
        continue;
      }
      worst[s] = std::max(worst[s], dy / dw);
    }
  });
  for (int s = 0; s < sources; ++s) {
    rep.max_ratio = std::max(rep.max_ratio, worst[s]);
    rep.pairs += counted[s];
  }
  rep.passed = rep.max_ratio <= 1.0 + slack && rep.max_edge_shortfall <= 1e-9;
  return rep;
}

DensityReport epsilon_density_check(const DiscreteMapPair& maps, const PolyComplex& w, double epsilon, int samples,
                                    std::uint64_t seed, int refinement) {
  DensityReport rep;
  rep.epsilon = epsilon;
  double longest = 0.0;
  for (double l : w.edge_lengths()) longest = std::max(longest, l);
  rep.slack = longest / (refinement + 1);

  const SteinerGraph graph(w, refinement);
  std::vector<std::pair<int, double>> sources;
  for (const PolyPoint& p : maps.vertex_points) {
    for (const auto& [node, d] : graph.attach(p)) {
      if (d == 0.0) sources.emplace_back(node, 0.0);
    }
  }
  const ShortestPathTree tree = dijkstra(graph.graph(), sources);
  Rng rng(seed);
  const int triangles = w.mesh().triangle_count();
  for (int k = 0; k < samples; ++k) {
    const int t = static_cast<int>(rng.index(triangles));
    const std::array<double, 3> weights{rng.uniform(), rng.uniform(), rng.uniform()};
    const PolyPoint x = weights[0] + weights[1] + weights[2] > 0.0 ? poly_point(w, t, weights)
                                                                   : poly_point(w, t, {1.0, 0.0, 0.0});
    rep.max_distance = std::max(rep.max_distance, graph.distance_to(tree, x));
    ++rep.samples;
  }
  rep.passed = rep.max_distance <= epsilon + rep.slack;
  return rep;
}

FiberReport fiber_connectivity_check(const PolyComplex& w) {
  const DiscMesh& mesh = w.mesh();
  const auto& cls = w.vertex_class();
  FiberReport rep;
  rep.classes = w.vertex_count();
  std::vector<char> seen(mesh.vertex_count(), 0);
  std::vector<char> class_started(w.vertex_count(), 0);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (seen[v]) continue;
    if (class_started[cls[v]]) {
      ++rep.disconnected;
      continue;
    }
    class_started[cls[v]] = 1;
    std::queue<int> todo;
    todo.push(v);
    seen[v] = 1;
    while (!todo.empty()) {
      const int u = todo.front();
      todo.pop();
      for (int n : mesh.neighbors(u)) {
        if (!seen[n] && cls[n] == cls[u]) {
          seen[n] = 1;
          todo.push(n);
        }
      }
    }
  }
  rep.passed = rep.disconnected == 0;
  return rep;
}

LoopProbeReport closed_geodesic_probe(const PolyComplex& w, int loops, int iterations, std::uint64_t seed,
                                      int refinement) {
  LoopProbeReport rep;
  rep.shortest_stabilized = std::numeric_limits<double>::infinity();
  if (w.kappa().sign() <= 0) return rep;
  rep.ran = true;
  rep.length_bound = 2.0 * w.kappa().diameter_bound();

  const DiscMesh& mesh = w.mesh();
  const auto& lengths = w.edge_lengths();
  const CsrGraph edges = mesh_graph(mesh, lengths);
  Rng rng(seed);

  // Closed vertex loops: a short random walk closed by a shortest edge path.
  std::vector<std::vector<int>> cycles;
  for (int attempt = 0; attempt < 20 * loops && static_cast<int>(cycles.size()) < loops; ++attempt) {
    const int start = static_cast<int>(rng.index(mesh.vertex_count()));
    std::vector<int> cycle{start};
    const int steps = 2 + static_cast<int>(rng.index(7));
    for (int k = 0; k < steps; ++k) {
      const auto& nb = mesh.neighbors(cycle.back());
      cycle.push_back(nb[rng.index(nb.size())]);
    }
    const ShortestPathTree back = dijkstra(edges, cycle.back());
    std::vector<int> home = back.path_to(start);
    std::reverse(home.begin(), home.end());
    cycle.insert(cycle.end(), home.begin() + 1, home.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cycle.size(); ++k) total += lengths[mesh.edge_id(cycle[k], cycle[k + 1])];
    if (total >= rep.length_bound || total <= defaults::zero_side) continue;
    cycles.push_back(std::move(cycle));
  }
  rep.loops = static_cast<int>(cycles.size());

  const SteinerGraph graph(w, refinement);
  const PolyGeodesics geo(graph);
  enum class Fate { collapsed, stabilized, unresolved };
  std::vector<Fate> fate(cycles.size(), Fate::unresolved);
  std::vector<double> final_length(cycles.size(), 0.0);
  parallel_for(cycles.size(), [&](std::size_t c) {
    const auto& cycle = cycles[c];
    std::vector<double> cumulative{0.0};
    for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
      cumulative.push_back(cumulative.back() + lengths[mesh.edge_id(cycle[k], cycle[k + 1])]);
    }
    const double initial = cumulative.back();
    std::vector<PolyPoint> pts;
    std::size_t seg = 0;
    for (int k = 0; k < loop_points; ++k) {
      const double s = initial * k / loop_points;
      while (seg + 2 < cumulative.size() && cumulative[seg + 1] <= s) ++seg;
      const double span = cumulative[seg + 1] - cumulative[seg];
      const double f = span > 0.0 ? std::clamp((s - cumulative[seg]) / span, 0.0, 1.0) : 0.0;
      pts.push_back(edge_point(w, cycle[seg], cycle[seg + 1], f));
    }
    double previous = initial;
    for (int it = 0; it < iterations; ++it) {
      double length = 0.0;
      for (int parity = 0; parity < 2; ++parity) {
        for (int k = parity; k < loop_points; k += 2) {
          const PolyPoint& a = pts[(k + loop_points - 1) % loop_points];
          const PolyPoint& b = pts[(k + 1) % loop_points];
          const PolyPath path = geo.shortest(a, b);
          pts[k] = geo.point_at(path, 0.5 * path.length);
          if (parity == 1) length += path.length;
        }
      }
      final_length[c] = length;
      if (length <= 1e-6 * initial) {
        fate[c] = Fate::collapsed;
        return;
      }
      if (previous - length <= 1e-10 * initial) {
        fate[c] = Fate::stabilized;
        return;
      }
      previous = length;
    }
  });
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    switch (fate[c]) {
      case Fate::collapsed: ++rep.collapsed; break;
      case Fate::stabilized:
        ++rep.stabilized;
        rep.shortest_stabilized = std::min(rep.shortest_stabilized, final_length[c]);
        break;
      case Fate::unresolved: ++rep.unresolved; break;
    }
  }
  rep.found_short_geodesic = rep.stabilized > 0 && rep.shortest_stabilized < rep.length_bound;
  return rep;
}

PolyCertificate certify_complex(const PolyComplex& w, int loops, int iterations, std::uint64_t seed) {
  PolyCertificate cert;
  cert.interior = interior_angle_check(w);
  cert.loops = closed_geodesic_probe(w, loops, iterations, seed);
  const bool angles = cert.interior.passes(defaults::interior_angle_tolerance);
  cert.certified = angles && !cert.loops.found_short_geodesic;
  char kappa[32];
  std::snprintf(kappa, sizeof kappa, "%g", w.kappa().value());
  if (cert.certified) {
    cert.statement = std::string("CAT(") + kappa + ") certified (desk scale)";
    if (cert.loops.ran) cert.statement += "; the closed-geodesic probe is a falsification test, not a proof";
  } else if (!angles) {
    cert.statement = "not certified: an interior vertex has corner-angle sum below 2 pi";
  } else {
    cert.statement = "not certified: the loop probe found a closed geodesic shorter than 2 R_kappa";
  }
  return cert;
}

}  // namespace catdisc
