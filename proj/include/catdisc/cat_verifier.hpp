#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catdisc/defaults.hpp"
#include "catdisc/mesh.hpp"
#include "catdisc/model_surface.hpp"
#include "catdisc/parallel.hpp"
#include "catdisc/poly_complex.hpp"
#include "catdisc/poly_geodesic.hpp"
#include "catdisc/rng.hpp"
#include "catdisc/target_space.hpp"

namespace catdisc {

struct ThinnessSample {
  int triple = 0;
  int s_index = 0;
  int t_index = 0;
  double s = 0.0;  // parameter actually used on side pq
  double t = 0.0;  // parameter actually used on side pr
  double measured = 0.0;
  double compared = 0.0;
  double defect = 0.0;  // measured - compared
};

enum class TripleStatus { evaluated, degenerate, perimeter, geodesic_failure };

struct TripleOutcome {
  TripleStatus status = TripleStatus::evaluated;
  std::array<double, 3> sides{};  // |pq|, |pr|, |qr|
  std::vector<ThinnessSample> samples;
  int untaut_paths = 0;  // induced metrics: paths left on the Steiner graph
};

struct CertReport {
  std::string distance_source;
  double kappa = 0.0;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  int grid = 0;
  int triples_requested = 0;
  int triples_evaluated = 0;
  int skipped_degenerate = 0;
  int skipped_perimeter = 0;
  int skipped_geodesic = 0;
  int sample_count = 0;
  double max_defect = 0.0;
  double max_abs_defect = 0.0;
  double mean_positive_defect = 0.0;
  std::vector<double> cell_max_defect;  // grid x grid, row s, column t
  int mesh_level = -1;                  // grid size for induced metrics
  int steiner_refinement = -1;
  int paths = 0;
  int untaut_paths = 0;
  double regularization = 0.0;  // length added to sides of degenerate triangles
  int regularized_triangles = 0;
  bool passed = false;
  std::vector<ThinnessSample> samples;

  // Folds a triple outcome in; call in a fixed order for reproducibility.
  void add(int triple, const TripleOutcome& outcome);
  void finish();
};

// Anything with a point type, distance and a geodesic that may fail.
template <class O>
concept GeodesicOracle = requires(const O& o, const typename O::Point& p, double t) {
  { o.distance(p, p) } -> std::convertible_to<double>;
  { o.geodesic(p, p, t) } -> std::same_as<std::optional<typename O::Point>>;
};

// Wraps a TargetSpace; non-unique geodesics count as failures.
struct TargetOracle {
  using Point = TargetPoint;
  const TargetSpace& space;
  double distance(const Point& p, const Point& q) const { return space.distance(p, q); }
  std::optional<Point> geodesic(const Point& p, const Point& q, double t) const {
    auto g = space.geodesic_checked(p, q, t);
    if (!g.unique) return std::nullopt;
    return std::move(g.point);
  }
};

// grid x grid samples of x on pq and y on pr with parameters i/(grid-1).
template <GeodesicOracle O>
TripleOutcome thinness_defect(const O& oracle, Kappa kappa, const typename O::Point& p, const typename O::Point& q,
                              const typename O::Point& r, int grid) {
  TripleOutcome out;
  out.sides = {oracle.distance(p, q), oracle.distance(p, r), oracle.distance(q, r)};
  if (*std::min_element(out.sides.begin(), out.sides.end()) <= defaults::zero_side) {
    out.status = TripleStatus::degenerate;
    return out;
  }
  if (kappa.sign() > 0 && out.sides[0] + out.sides[1] + out.sides[2] >= 2.0 * kappa.diameter_bound()) {
    out.status = TripleStatus::perimeter;
    return out;
  }
  const ComparisonTriangle tri = build_comparison_triangle(kappa, out.sides[0], out.sides[1], out.sides[2]);
  std::vector<typename O::Point> xs;
  std::vector<typename O::Point> ys;
  std::vector<ModelPoint> xbar;
  std::vector<ModelPoint> ybar;
  for (int i = 0; i < grid; ++i) {
    const double s = grid > 1 ? static_cast<double>(i) / (grid - 1) : 0.0;
    auto x = oracle.geodesic(p, q, s);
    auto y = oracle.geodesic(p, r, s);
    if (!x || !y) {
      out.status = TripleStatus::geodesic_failure;
      return out;
    }
    xs.push_back(std::move(*x));
    ys.push_back(std::move(*y));
    xbar.push_back(geodesic_point(kappa, tri.vertices[0], tri.vertices[1], s));
    ybar.push_back(geodesic_point(kappa, tri.vertices[0], tri.vertices[2], s));
  }
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      ThinnessSample smp;
      smp.s_index = i;
      smp.t_index = j;
      smp.s = grid > 1 ? static_cast<double>(i) / (grid - 1) : 0.0;
      smp.t = grid > 1 ? static_cast<double>(j) / (grid - 1) : 0.0;
      smp.measured = oracle.distance(xs[i], ys[j]);
      smp.compared = model_distance(kappa, xbar[i], ybar[j]);
      smp.defect = smp.measured - smp.compared;
      out.samples.push_back(smp);
    }
  }
  return out;
}

// Evaluates pre-drawn triples in parallel and folds them in triple order.
template <GeodesicOracle O>
CertReport certify_triples(const O& oracle, Kappa kappa,
                           const std::vector<std::array<typename O::Point, 3>>& triples, int grid, double tolerance) {
  std::vector<TripleOutcome> outcomes(triples.size());
  parallel_for(triples.size(), [&](std::size_t k) {
    outcomes[k] = thinness_defect(oracle, kappa, triples[k][0], triples[k][1], triples[k][2], grid);
  });
  CertReport rep;
  rep.kappa = kappa.value();
  rep.tolerance = tolerance;
  rep.grid = grid;
  rep.triples_requested = static_cast<int>(triples.size());
  rep.cell_max_defect.assign(static_cast<std::size_t>(grid) * grid, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < outcomes.size(); ++k) rep.add(static_cast<int>(k), outcomes[k]);
  rep.finish();
  return rep;
}

// Random point of a backend: a disc of radius 2 around the base point for
// planar and hyperbolic models, the whole sphere, a cube [-1, 1]^n, a
// uniformly chosen tree edge, or the cone disc of radius 2.
TargetPoint sample_point(const TargetSpace& space, Rng& rng);

// Draws triples (rejecting degenerate and, for kappa > 0, too-large ones)
// until `triple_budget` are kept or 50x that many were drawn.
CertReport certify_cat(const TargetSpace& space, Kappa kappa, int triple_budget, int grid, double tolerance,
                       std::uint64_t seed);

struct InducedCertOptions {
  int triple_budget = defaults::triple_budget;
  int grid = defaults::thinness_grid;
  double tolerance = defaults::defect_tolerance_mesh;
  std::uint64_t seed = defaults::seed;
  int steiner_refinement = defaults::steiner_refinement;
  bool chords = true;  // false: paths restricted to mesh edges
  bool taut = true;    // false: distances are Steiner path lengths
  int mesh_level = -1;
  // Sides of degenerate triangles are lengthened by this fraction of the
  // mean edge length, so that every path can be pulled taut; 0 disables.
  double regularization = defaults::degenerate_regularization;
};

// Certifies the length space of a mapped triangulated disc: the mesh
// triangles become comparison triangles at the chart curvature (the target's
// curvature bound, 0 when it has none) and geodesics are Steiner shortest
// paths pulled taut in their strip of triangles. Triples are mesh vertices
// nearest to seeded random points of the parameter square, so successive
// refinements see the same triples.
CertReport certify_induced(const MappedGraph& mg, Kappa kappa, const InducedCertOptions& options);

// Same on a prepared Steiner graph; mesh uv coordinates locate the triples.
CertReport certify_induced(const SteinerGraph& wg, Kappa kappa, const InducedCertOptions& options);

// Largest samplewise increase of the defect when the comparison curvature
// grows from kappa_low to kappa_high, over triples valid for both.
double kappa_monotonicity_violation(const TargetSpace& space, Kappa kappa_low, Kappa kappa_high, int triple_budget,
                                    int grid, std::uint64_t seed);

}  // namespace catdisc
