#include "catdisc/cat_verifier.hpp"

#include <cmath>
#include <numbers>

#include "catdisc/error.hpp"
#include "catdisc/shortest_paths.hpp"

namespace catdisc {

void CertReport::add(int triple, const TripleOutcome& outcome) {
  switch (outcome.status) {
    case TripleStatus::degenerate: ++skipped_degenerate; return;
    case TripleStatus::perimeter: ++skipped_perimeter; return;
    case TripleStatus::geodesic_failure: ++skipped_geodesic; return;
    case TripleStatus::evaluated: break;
  }
  ++triples_evaluated;
  for (ThinnessSample s : outcome.samples) {
    s.triple = triple;
    if (sample_count == 0 || s.defect > max_defect) max_defect = s.defect;
    max_abs_defect = std::max(max_abs_defect, std::abs(s.defect));
    mean_positive_defect += std::max(0.0, s.defect);
    ++sample_count;
    double& cell = cell_max_defect[static_cast<std::size_t>(s.s_index) * grid + s.t_index];
    cell = std::max(cell, s.defect);
    samples.push_back(s);
  }
}

void CertReport::finish() {
  if (sample_count > 0) mean_positive_defect /= sample_count;
  for (double& c : cell_max_defect) {
    if (!std::isfinite(c)) c = 0.0;
  }
  passed = triples_evaluated > 0 && max_defect <= tolerance;
}

TargetPoint sample_point(const TargetSpace& space, Rng& rng) {
  switch (space.kind()) {
    case BackendKind::model: {
      const Kappa k = *space.model_kappa();
      if (k.sign() > 0) {
        const double z = rng.uniform(-1.0, 1.0);
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double r = k.radius();
        return project_to_model(k, Vec3{r * rho * std::cos(phi), r * rho * std::sin(phi), r * z});
      }
      const double dist = 2.0 * std::sqrt(rng.uniform());
      return model_polar(k, dist, rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    case BackendKind::euclidean: {
      EuclideanPoint p{std::vector<double>(space.euclidean_dim())};
      for (double& x : p.x) x = rng.uniform(-1.0, 1.0);
      return p;
    }
    case BackendKind::tree: {
      const MetricTree& t = *space.as_tree();
      const int e = static_cast<int>(rng.index(t.edge_count()));
      return TreePoint{e, rng.uniform() * t.edges()[e].weight};
    }
    case BackendKind::cone:
      return ConePoint{2.0 * std::sqrt(rng.uniform()), rng.uniform(0.0, space.cone_angle())};
  }
  throw Error(ErrorCode::invalid_argument, "unknown backend");
}

namespace {

bool usable_triple(const TargetSpace& space, Kappa kappa, const std::array<TargetPoint, 3>& t) {
  const double a = space.distance(t[0], t[1]);
  const double b = space.distance(t[0], t[2]);
  const double c = space.distance(t[1], t[2]);
  if (std::min({a, b, c}) <= defaults::zero_side) return false;
  return kappa.sign() <= 0 || a + b + c < 2.0 * kappa.diameter_bound();
}

std::vector<std::array<TargetPoint, 3>> draw_triples(const TargetSpace& space, Kappa kappa, int budget,
                                                     std::uint64_t seed, int& rejected) {
  Rng rng(seed);
  std::vector<std::array<TargetPoint, 3>> triples;
  rejected = 0;
  for (int attempt = 0; attempt < 50 * budget && static_cast<int>(triples.size()) < budget; ++attempt) {
    std::array<TargetPoint, 3> t{sample_point(space, rng), sample_point(space, rng), sample_point(space, rng)};
    if (usable_triple(space, kappa, t)) {
      triples.push_back(std::move(t));
    } else {
      ++rejected;
    }
  }
  return triples;
}

}  // namespace

CertReport certify_cat(const TargetSpace& space, Kappa kappa, int triple_budget, int grid, double tolerance,
                       std::uint64_t seed) {
  if (triple_budget < 1 || grid < 2) throw Error(ErrorCode::invalid_argument, "need a positive budget and grid >= 2");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be > 0");
  int rejected = 0;
  const auto triples = draw_triples(space, kappa, triple_budget, seed, rejected);
  CertReport rep = certify_triples(TargetOracle{space}, kappa, triples, grid, tolerance);
  rep.triples_requested = triple_budget;
  rep.skipped_perimeter += rejected;
  rep.seed = seed;
  rep.distance_source = "backend " + space.describe();
  return rep;
}

double kappa_monotonicity_violation(const TargetSpace& space, Kappa kappa_low, Kappa kappa_high, int triple_budget,
                                    int grid, std::uint64_t seed) {
  int rejected = 0;
  const auto triples = draw_triples(space, kappa_high, triple_budget, seed, rejected);
  std::vector<double> worst(triples.size(), -std::numeric_limits<double>::infinity());
  const TargetOracle oracle{space};
  parallel_for(triples.size(), [&](std::size_t k) {
    const auto lo = thinness_defect(oracle, kappa_low, triples[k][0], triples[k][1], triples[k][2], grid);
    const auto hi = thinness_defect(oracle, kappa_high, triples[k][0], triples[k][1], triples[k][2], grid);
    if (lo.status != TripleStatus::evaluated || hi.status != TripleStatus::evaluated) return;
    for (std::size_t i = 0; i < lo.samples.size(); ++i) {
      worst[k] = std::max(worst[k], hi.samples[i].defect - lo.samples[i].defect);
    }
  });
  double out = -std::numeric_limits<double>::infinity();
  for (double w : worst) out = std::max(out, w);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

TripleOutcome induced_triple(const PolyGeodesics& geo, Kappa kappa, int p, int q, int r, int grid) {
  const SteinerGraph& wg = geo.graph();
  TripleOutcome out;
  const PolyPoint pp = vertex_poly_point(wg.complex(), p);
  const PolyPoint qp = vertex_poly_point(wg.complex(), q);
  const PolyPoint rp = vertex_poly_point(wg.complex(), r);
  const ShortestPathTree from_p = wg.from(pp);
  const PolyPath pq = geo.shortest(pp, from_p, qp);
  const PolyPath pr = geo.shortest(pp, from_p, rp);
  const PolyPath qr = geo.shortest(qp, rp);
  out.sides = {pq.length, pr.length, qr.length};
  auto note = [&](const PolyPath& path) { out.untaut_paths += path.taut ? 0 : 1; };
  note(pq);
  note(pr);
  note(qr);
  if (*std::min_element(out.sides.begin(), out.sides.end()) <= defaults::zero_side) {
    out.status = TripleStatus::degenerate;
    return out;
  }
  if (kappa.sign() > 0 && out.sides[0] + out.sides[1] + out.sides[2] >= 2.0 * kappa.diameter_bound()) {
    out.status = TripleStatus::perimeter;
    return out;
  }
  // Untaut sides are upper bounds and can break the triangle inequality.
  ComparisonTriangle tri;
  try {
    tri = build_comparison_triangle(kappa, out.sides[0], out.sides[1], out.sides[2]);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::triangle_inequality) throw;
    out.status = TripleStatus::geodesic_failure;
    return out;
  }
  std::vector<PolyPoint> xs(grid);
  std::vector<PolyPoint> ys(grid);
  std::vector<ModelPoint> xbar(grid);
  std::vector<ModelPoint> ybar(grid);
  for (int i = 0; i < grid; ++i) {
    const double f = static_cast<double>(i) / (grid - 1);
    xs[i] = i == 0 ? pp : (i == grid - 1 ? qp : geo.point_at(pq, f * out.sides[0]));
    ys[i] = i == 0 ? pp : (i == grid - 1 ? rp : geo.point_at(pr, f * out.sides[1]));
    xbar[i] = geodesic_point(kappa, tri.vertices[0], tri.vertices[1], f);
    ybar[i] = geodesic_point(kappa, tri.vertices[0], tri.vertices[2], f);
  }
  for (int i = 0; i < grid; ++i) {
    const ShortestPathTree from_x = i == 0 ? ShortestPathTree{} : wg.from(xs[i]);
    const ShortestPathTree& tree = i == 0 ? from_p : from_x;
    for (int j = 0; j < grid; ++j) {
      ThinnessSample smp;
      smp.s_index = i;
      smp.t_index = j;
      smp.s = static_cast<double>(i) / (grid - 1);
      smp.t = static_cast<double>(j) / (grid - 1);
      if (i == 0) {
        smp.measured = smp.t * out.sides[1];
      } else {
        const PolyPath xy = geo.shortest(xs[i], tree, ys[j]);
        note(xy);
        smp.measured = xy.length;
      }
      smp.compared = model_distance(kappa, xbar[i], ybar[j]);
      smp.defect = smp.measured - smp.compared;
      out.samples.push_back(smp);
    }
  }
  return out;
}

int nearest_vertex(const DiscMesh& mesh, double u, double v) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < mesh.vertex_count(); ++k) {
    const double du = mesh.uv()[k].u - u;
    const double dv = mesh.uv()[k].v - v;
    const double d = du * du + dv * dv;
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

CertReport certify_induced(const SteinerGraph& wg, Kappa kappa, const InducedCertOptions& options) {
  if (options.triple_budget < 1 || options.grid < 2) {
    throw Error(ErrorCode::invalid_argument, "need a positive budget and grid >= 2");
  }
  if (!(options.tolerance > 0.0)) throw Error(ErrorCode::invalid_argument, "tolerance must be > 0");
  const DiscMesh& mesh = wg.complex().mesh();

  // Parameter-square bounding box, so meshes on other domains work too.
  double u0 = std::numeric_limits<double>::infinity();
  double v0 = u0;
  double u1 = -u0;
  double v1 = -u0;
  for (const Vec2& p : mesh.uv()) {
    u0 = std::min(u0, p.u);
    u1 = std::max(u1, p.u);
    v0 = std::min(v0, p.v);
    v1 = std::max(v1, p.v);
  }
  Rng rng(options.seed);
  std::vector<std::array<int, 3>> candidates;
  for (int k = 0; k < 50 * options.triple_budget; ++k) {
    std::array<int, 3> t{};
    for (int& v : t) {
      const double u = rng.uniform(u0, u1);
      const double w = rng.uniform(v0, v1);
      v = nearest_vertex(mesh, u, w);
    }
    candidates.push_back(t);
  }

  CertReport rep;
  rep.kappa = kappa.value();
  rep.tolerance = options.tolerance;
  rep.seed = options.seed;
  rep.grid = options.grid;
  rep.triples_requested = options.triple_budget;
  rep.mesh_level = options.mesh_level;
  rep.steiner_refinement = wg.refinement();
  rep.distance_source = std::string("induced length space (") + (options.chords ? "chart chords" : "edge paths") +
                   (options.taut ? ", taut" : "") + ")";
  rep.cell_max_defect.assign(static_cast<std::size_t>(options.grid) * options.grid,
                             -std::numeric_limits<double>::infinity());

  const PolyGeodesics geo(wg, options.taut);
  std::size_t next = 0;
  int index = 0;
  while (rep.triples_evaluated < options.triple_budget && next < candidates.size()) {
    const std::size_t want = static_cast<std::size_t>(options.triple_budget - rep.triples_evaluated);
    const std::size_t chunk = std::min(want, candidates.size() - next);
    std::vector<TripleOutcome> outcomes(chunk);
    parallel_for(chunk, [&](std::size_t k) {
      const auto& t = candidates[next + k];
      if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) {
        outcomes[k].status = TripleStatus::degenerate;
        return;
      }
      outcomes[k] = induced_triple(geo, kappa, t[0], t[1], t[2], options.grid);
    });
    for (const auto& o : outcomes) {
      rep.add(index++, o);
      rep.untaut_paths += o.untaut_paths;
      rep.paths += o.status == TripleStatus::evaluated ? 3 + (options.grid - 1) * options.grid : 3;
    }
    next += chunk;
  }
  rep.finish();
  return rep;
}

CertReport certify_induced(const MappedGraph& mg, Kappa kappa, const InducedCertOptions& options) {
  mg.validate();
  const double chart = mg.space.curvature_bound().value_or(0.0);
  std::vector<double> lengths = mg.edge_lengths();
  int touched = 0;
  double delta = 0.0;
  if (options.regularization > 0.0) {
    double mean = 0.0;
    for (double l : lengths) mean += l;
    delta = options.regularization * mean / static_cast<double>(std::max<std::size_t>(1, lengths.size()));
    if (delta > 0.0) lengths = regularized_lengths(*mg.mesh, lengths, delta, &touched);
  }
  const PolyComplex complex = PolyComplex::glue(mg.mesh, std::move(lengths), Kappa(chart));
  const SteinerGraph wg(complex, options.steiner_refinement, options.chords);
  CertReport rep = certify_induced(wg, kappa, options);
  rep.regularization = touched > 0 ? delta : 0.0;
  rep.regularized_triangles = touched;
  return rep;
}

}  // namespace catdisc
