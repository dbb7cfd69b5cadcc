#include "catdisc/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "catdisc/error.hpp"

namespace catdisc {

namespace {

std::vector<double> cumulative_lengths(const TargetSpace& space, std::span<const TargetPoint> samples) {
  std::vector<double> out{0.0};
  for (std::size_t k = 1; k < samples.size(); ++k) out.push_back(out.back() + space.distance(samples[k - 1], samples[k]));
  return out;
}

std::vector<TargetPoint> resample(const TargetSpace& space, std::span<const TargetPoint> samples, int count) {
  std::vector<TargetPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(polyline_point(space, samples, count > 1 ? static_cast<double>(i) / (count - 1) : 0.0));
  }
  return out;
}

double max_spacing(const TargetSpace& space, std::span<const TargetPoint> samples) {
  double out = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) out = std::max(out, space.distance(samples[k - 1], samples[k]));
  return out;
}

}  // namespace

TargetPoint polyline_point(const TargetSpace& space, std::span<const TargetPoint> samples, double a) {
  if (samples.empty()) throw Error(ErrorCode::invalid_argument, "empty polyline");
  if (samples.size() == 1) return samples.front();
  a = std::clamp(a, 0.0, 1.0);
  const std::vector<double> cum = cumulative_lengths(space, samples);
  const double total = cum.back();
  if (!std::isfinite(total)) throw Error(ErrorCode::invalid_argument, "polyline length is not finite");
  const std::size_t segments = samples.size() - 1;
  if (total <= 0.0) {
    const double x = a * static_cast<double>(segments);
    const std::size_t k = std::min(segments - 1, static_cast<std::size_t>(x));
    return space.geodesic(samples[k], samples[k + 1], x - static_cast<double>(k));
  }
  if (a == 1.0) return samples.back();
  const double s = a * total;
  const std::size_t k = std::min<std::size_t>(
      segments - 1, static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin()) - 1);
  const double span = cum[k + 1] - cum[k];
  return span > 0.0 ? space.geodesic(samples[k], samples[k + 1], std::clamp((s - cum[k]) / span, 0.0, 1.0))
                    : samples[k];
}

std::vector<TargetPoint> geodesic_samples(const TargetSpace& space, const TargetPoint& p, const TargetPoint& q,
                                          int count) {
  if (count < 2) throw Error(ErrorCode::invalid_argument, "need at least 2 geodesic samples");
  std::vector<TargetPoint> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    out.push_back(k == 0 ? p : (k == count - 1 ? q : space.geodesic(p, q, static_cast<double>(k) / (count - 1))));
  }
  return out;
}

RuledDisc ruled_disc_map(const RuledDiscSpec& spec) {
  if (spec.n_a < 2 || spec.n_t < 2) throw Error(ErrorCode::invalid_argument, "ruled grid needs n_a, n_t >= 2");
  if (spec.eta0.empty() || spec.eta1.empty()) throw Error(ErrorCode::invalid_argument, "boundary curves are empty");
  for (const auto* eta : {&spec.eta0, &spec.eta1}) {
    for (const auto& p : *eta) spec.space.validate(p);
    if (!std::isfinite(spec.space.curve_length(*eta))) {
      throw Error(ErrorCode::invalid_argument, "boundary curve has non-finite sampled length");
    }
  }
  const double bound = spec.space.diameter_bound();
  if (std::isfinite(bound) && spec.eta0.size() == spec.eta1.size()) {
    for (std::size_t k = 0; k < spec.eta0.size(); ++k) {
      if (!(spec.space.distance(spec.eta0[k], spec.eta1[k]) < bound)) {
        throw Error(ErrorCode::non_unique_geodesic,
                    "boundary sample " + std::to_string(k) + ": eta0 and eta1 are not closer than R_kappa");
      }
    }
  }

  const std::vector<TargetPoint> starts = resample(spec.space, spec.eta0, spec.n_a);
  const std::vector<TargetPoint> ends = resample(spec.space, spec.eta1, spec.n_a);
  std::vector<TargetPoint> images(static_cast<std::size_t>(spec.n_a) * spec.n_t);
  for (int i = 0; i < spec.n_a; ++i) {
    const TargetPoint& p = starts[i];
    const TargetPoint& q = ends[i];
    const double a = static_cast<double>(i) / (spec.n_a - 1);
    if (!(spec.space.distance(p, q) < bound)) {
      throw Error(ErrorCode::non_unique_geodesic,
                  "column a = " + std::to_string(a) + ": endpoints are not closer than R_kappa");
    }
    for (int j = 0; j < spec.n_t; ++j) {
      const double t = static_cast<double>(j) / (spec.n_t - 1);
      const auto g = spec.space.geodesic_checked(p, q, t);
      if (!g.unique) {
        throw Error(ErrorCode::non_unique_geodesic, "column a = " + std::to_string(a) + " has no unique geodesic");
      }
      images[static_cast<std::size_t>(j) * spec.n_a + i] = j == 0 ? p : (j == spec.n_t - 1 ? q : g.point);
    }
  }
  return RuledDisc{MappedGraph::make(std::make_shared<const DiscMesh>(DiscMesh::grid(spec.n_a, spec.n_t)),
                                     spec.space, std::move(images)),
                   spec.n_a, spec.n_t, starts, ends};
}

QuadrangleReport quadrangle_bound_check(const RuledDisc& disc, std::optional<double> rho) {
  const TargetSpace& space = disc.graph.space;
  QuadrangleReport rep;
  rep.rho = rho.value_or(defaults::rho_factor *
                         std::max(max_spacing(space, disc.column_start), max_spacing(space, disc.column_end)));
  for (int i = 0; i + 1 < disc.n_a; ++i) {
    const double d0 = space.distance(disc.column_start[i], disc.column_start[i + 1]);
    const double d1 = space.distance(disc.column_end[i], disc.column_end[i + 1]);
    if (d0 > rep.rho || d1 > rep.rho) continue;
    ++rep.column_pairs;
    double worst = 0.0;
    for (int j = 0; j < disc.n_t; ++j) {
      worst = std::max(worst, space.distance(disc.graph.images[disc.vertex(i, j)],
                                             disc.graph.images[disc.vertex(i + 1, j)]));
    }
    if (d0 + d1 > 0.0) {
      rep.empirical_l = std::max(rep.empirical_l, worst / (d0 + d1));
    } else if (worst > 0.0) {
      rep.empirical_l = std::numeric_limits<double>::infinity();
    }
  }
  rep.finite = std::isfinite(rep.empirical_l);
  rep.at_most_one = rep.empirical_l <= 1.0 + 1e-12;
  return rep;
}

RuledMinimalityReport ruled_is_length_minimizing_check(const RuledDisc& disc, double tolerance) {
  const TargetSpace& space = disc.graph.space;
  RuledMinimalityReport rep;
  std::vector<TargetPoint> column(disc.n_t);
  for (int i = 0; i < disc.n_a; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int j = 0; j < disc.n_t; ++j) {
      column[j] = disc.graph.images[disc.vertex(i, j)];
      if (j > 0) {
        const double l = space.distance(column[j - 1], column[j]);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
      }
    }
    rep.max_length_excess = std::max(rep.max_length_excess,
                                     std::abs(space.curve_length(column) - space.distance(column.front(), column.back())));
    rep.max_spacing_spread = std::max(rep.max_spacing_spread, hi - lo);
  }
  rep.geodesic_columns = rep.max_length_excess <= tolerance;
  rep.proportional = rep.max_spacing_spread <= tolerance;
  rep.passed = rep.geodesic_columns && rep.proportional;
  return rep;
}

std::vector<double> grid_axis_weights(const DiscMesh& mesh) {
  std::vector<double> w(mesh.edge_count(), 1.0);
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const Vec2& a = mesh.uv()[mesh.edges()[e].first];
    const Vec2& b = mesh.uv()[mesh.edges()[e].second];
    if (std::abs(a.u - b.u) > 1e-12 && std::abs(a.v - b.v) > 1e-12) w[e] = 0.0;
  }
  return w;
}

std::vector<TargetPoint> square_boundary_trace(const TargetSpace& space, const DiscMesh& mesh,
                                               std::span<const TargetPoint> corners) {
  if (corners.size() != 4) throw Error(ErrorCode::invalid_argument, "square trace needs 4 corner images");
  constexpr double tol = 1e-12;
  std::vector<TargetPoint> out;
  for (int v : mesh.boundary_vertices()) {
    const Vec2& p = mesh.uv()[v];
    double s = 0.0;
    if (std::abs(p.v) <= tol) {
      s = p.u;
    } else if (std::abs(p.u - 1.0) <= tol) {
      s = 1.0 + p.v;
    } else if (std::abs(p.v - 1.0) <= tol) {
      s = 3.0 - p.u;
    } else if (std::abs(p.u) <= tol) {
      s = 4.0 - p.v;
    } else {
      throw Error(ErrorCode::invalid_mesh, "boundary vertex " + std::to_string(v) + " is not on the unit square");
    }
    const int side = std::min(3, static_cast<int>(s));
    const double f = std::clamp(s - side, 0.0, 1.0);
    const TargetPoint& a = corners[side];
    const TargetPoint& b = corners[(side + 1) % 4];
    out.push_back(f == 0.0 ? a : (f == 1.0 ? b : space.geodesic(a, b, f)));
  }
  return out;
}

HarmonicResult harmonic_relax(const HarmonicSpec& spec) {
  if (!spec.mesh) throw Error(ErrorCode::invalid_argument, "harmonic spec has no mesh");
  const DiscMesh& mesh = *spec.mesh;
  const std::vector<int> boundary = mesh.boundary_vertices();
  if (spec.trace.size() != boundary.size()) {
    throw Error(ErrorCode::invalid_argument, "one trace point per boundary vertex required");
  }
  if (!(spec.tol > 0.0) || spec.max_sweeps < 1) {
    throw Error(ErrorCode::invalid_argument, "harmonic tolerance must be > 0 and max_sweeps >= 1");
  }
  for (const auto& p : spec.trace) spec.space.validate(p);

  std::vector<double> weights = spec.weights.empty() ? grid_axis_weights(mesh) : spec.weights;
  if (static_cast<int>(weights.size()) != mesh.edge_count()) {
    throw Error(ErrorCode::invalid_argument, "one weight per edge required");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_argument, "edge weights must be >= 0");
  }

  const double radius = spec.space.enclosing_ball(spec.trace).second;
  const double bound = spec.space.diameter_bound();
  if (std::isfinite(bound) && !(radius < 0.5 * bound)) {
    throw Error(ErrorCode::out_of_convexity, "boundary trace does not fit in a ball of radius < R_kappa / 2");
  }
  const std::vector<double> equal(spec.trace.size(), 1.0);
  std::vector<TargetPoint> images(mesh.vertex_count(), spec.space.local_barycenter(spec.trace, equal));
  std::vector<char> fixed(mesh.vertex_count(), 0);
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    images[boundary[k]] = spec.trace[k];
    fixed[boundary[k]] = 1;
  }
  HarmonicResult out{MappedGraph::make(spec.mesh, spec.space, std::move(images), std::move(fixed)),
                     std::move(weights), {}, {}, 0, false};
  MappedGraph& mg = out.graph;

  struct Star {
    std::vector<int> neighbors;
    std::vector<double> weights;
  };
  std::vector<Star> stars(mesh.vertex_count());
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (out.weights[e] <= 0.0) continue;
    const auto [a, b] = mesh.edges()[e];
    stars[a].neighbors.push_back(b);
    stars[a].weights.push_back(out.weights[e]);
    stars[b].neighbors.push_back(a);
    stars[b].weights.push_back(out.weights[e]);
  }
  auto local_energy = [&](int v, const TargetPoint& x) {
    double e = 0.0;
    for (std::size_t k = 0; k < stars[v].neighbors.size(); ++k) {
      const double d = spec.space.distance(x, mg.images[stars[v].neighbors[k]]);
      e += stars[v].weights[k] * d * d;
    }
    return e;
  };

  const std::vector<int> order = mg.free_vertices();
  std::vector<TargetPoint> pts;
  out.energy_trace.push_back(discrete_energy(mg, out.weights));
  std::vector<TargetPoint> before;
  for (int sweep = 0; sweep < spec.max_sweeps; ++sweep) {
    double max_move = 0.0;
    before = mg.images;
    for (int v : order) {
      const Star& star = stars[v];
      if (star.neighbors.empty()) continue;
      pts.clear();
      for (int n : star.neighbors) pts.push_back(mg.images[n]);
      TargetPoint next = spec.space.local_barycenter(pts, star.weights);
      if (local_energy(v, next) > local_energy(v, mg.images[v])) continue;
      max_move = std::max(max_move, spec.space.distance(mg.images[v], next));
      mg.images[v] = std::move(next);
    }
    const double energy = discrete_energy(mg, out.weights);
    if (energy > out.energy_trace.back()) {
      // Only rounding can raise the total: the map is stationary.
      mg.images = std::move(before);
      out.converged = true;
      break;
    }
    ++out.sweeps;
    out.max_moves.push_back(max_move);
    out.energy_trace.push_back(energy);
    if (max_move < spec.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double discrete_energy(const MappedGraph& mg, std::span<const double> weights) {
  if (static_cast<int>(weights.size()) != mg.mesh->edge_count()) {
    throw Error(ErrorCode::invalid_argument, "one weight per edge required");
  }
  double sum = 0.0;
  double carry = 0.0;
  for (int e = 0; e < mg.mesh->edge_count(); ++e) {
    if (weights[e] == 0.0) continue;
    const double d = mg.edge_length(e);
    const double term = weights[e] * d * d - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

EdgeModulus edge_modulus(const MappedGraph& mg) {
  EdgeModulus out;
  const DiscMesh& mesh = *mg.mesh;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const double d = mg.edge_length(e);
    out.all = std::max(out.all, d);
    const auto [a, b] = mesh.edges()[e];
    if (!mesh.is_boundary(a) && !mesh.is_boundary(b)) out.interior = std::max(out.interior, d);
  }
  return out;
}

}  // namespace catdisc
