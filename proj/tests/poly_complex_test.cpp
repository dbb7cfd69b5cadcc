#include "catdisc/poly_complex.hpp"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "catdisc/defaults.hpp"
#include "catdisc/poly_geodesic.hpp"
#include "catdisc/rng.hpp"

using namespace catdisc;

namespace {

std::shared_ptr<const DiscMesh> share(DiscMesh m) { return std::make_shared<const DiscMesh>(std::move(m)); }

// Edge lengths of the identity map of the unit square.
std::vector<double> uv_lengths(const DiscMesh& m) {
  std::vector<double> out;
  for (auto [a, b] : m.edges()) out.push_back(std::hypot(m.uv()[a].u - m.uv()[b].u, m.uv()[a].v - m.uv()[b].v));
  return out;
}

PolyComplex flat_square(int n) {
  auto mesh = share(DiscMesh::grid(n, n));
  return PolyComplex::glue(mesh, uv_lengths(*mesh), Kappa(0.0));
}

Vec2 uv_of(const PolyComplex& w, int t, const std::array<double, 3>& bary) {
  const Triangle& tri = w.mesh().triangles()[t];
  Vec2 out;
  for (int k = 0; k < 3; ++k) {
    out.u += bary[k] * w.mesh().uv()[tri[k]].u;
    out.v += bary[k] * w.mesh().uv()[tri[k]].v;
  }
  return out;
}

std::array<double, 3> random_weights(Rng& rng) {
  const double a = rng.uniform();
  const double b = rng.uniform();
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return {lo, hi - lo, 1.0 - hi};
}

}  // namespace

TEST(Glue, FlatSquareHasNoDefects) {
  const PolyComplex w = flat_square(5);
  EXPECT_LE(w.gluing_defect(), 1e-15);
  EXPECT_EQ(w.degenerate_count(Degeneracy::none), w.mesh().triangle_count());
  EXPECT_EQ(w.vertex_count(), 25);
}

TEST(Glue, ConstantMapIsAPoint) {
  auto mesh = share(DiscMesh::grid(4, 4));
  const PolyComplex w = PolyComplex::glue(mesh, std::vector<double>(mesh->edge_count(), 0.0), Kappa(1.0));
  EXPECT_EQ(w.vertex_count(), 1);
  EXPECT_EQ(w.degenerate_count(Degeneracy::point), mesh->triangle_count());
}

TEST(IntrinsicDistance, TwoTriangleSquareAcrossTheDiagonal) {
  const PolyComplex w = flat_square(2);
  // Corners (1,0) and (0,1) lie in different triangles.
  const double d = intrinsic_distance(w, vertex_poly_point(w, 1), vertex_poly_point(w, 2), 8);
  EXPECT_NEAR(d, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
  EXPECT_GE(d, std::sqrt(2.0) - 1e-12);
}

TEST(IntrinsicDistance, GridOppositeCornersWithinTwoPercent) {
  const PolyComplex w = flat_square(6);
  const double d = intrinsic_distance(w, vertex_poly_point(w, 5), vertex_poly_point(w, 30), 8);
  EXPECT_NEAR(d, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
}

TEST(IntrinsicDistance, SelfIsZero) {
  const PolyComplex w = flat_square(4);
  const PolyPoint p = poly_point(w, 3, {0.2, 0.3, 0.5});
  EXPECT_EQ(intrinsic_distance(w, p, p, 4), 0.0);
}

TEST(IntrinsicDistance, SameTriangleIsChartDistance) {
  const PolyComplex w = flat_square(4);
  const PolyPoint a = poly_point(w, 7, {0.2, 0.3, 0.5});
  const PolyPoint b = poly_point(w, 7, {0.6, 0.1, 0.3});
  EXPECT_NEAR(intrinsic_distance(w, a, b, 2), model_distance(w.kappa(), a.chart, b.chart), 1e-15);
}

TEST(IntrinsicDistance, NestedRefinementsNeverIncrease) {
  const PolyComplex w = flat_square(5);
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyPoint a = poly_point(w, static_cast<int>(rng.index(32)), random_weights(rng));
    const PolyPoint b = poly_point(w, static_cast<int>(rng.index(32)), random_weights(rng));
    double last = std::numeric_limits<double>::infinity();
    for (int r : {1, 3, 7}) {
      const double d = intrinsic_distance(w, a, b, r);
      EXPECT_LE(d, last + 1e-12);
      last = d;
    }
  }
}

TEST(PolyGeodesics, FlatGridDistancesAreExact) {
  for (int n : {3, 8, 16}) {
    const PolyComplex w = flat_square(n);
    const SteinerGraph g(w, defaults::steiner_refinement);
    const PolyGeodesics geo(g);
    Rng rng(static_cast<std::uint64_t>(n));
    const int triangles = w.mesh().triangle_count();
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int ta = static_cast<int>(rng.index(triangles));
      const int tb = static_cast<int>(rng.index(triangles));
      const auto wa = random_weights(rng);
      const auto wb = random_weights(rng);
      const Vec2 ua = uv_of(w, ta, wa);
      const Vec2 ub = uv_of(w, tb, wb);
      const PolyPath path = geo.shortest(poly_point(w, ta, wa), poly_point(w, tb, wb));
      worst = std::max(worst, std::abs(path.length - std::hypot(ua.u - ub.u, ua.v - ub.v)));
    }
    EXPECT_LE(worst, 1e-12) << "n = " << n;
  }
}

TEST(PolyGeodesics, PointAtHalfLengthIsTheMidpoint) {
  const PolyComplex w = flat_square(6);
  const SteinerGraph g(w, defaults::steiner_refinement);
  const PolyGeodesics geo(g);
  const PolyPoint a = vertex_poly_point(w, 0);
  const PolyPoint b = vertex_poly_point(w, 35);
  const PolyPath path = geo.shortest(a, b);
  ASSERT_TRUE(path.taut);
  const PolyPoint m = geo.point_at(path, 0.5 * path.length);
  EXPECT_NEAR(geo.shortest(a, m).length, 0.5 * path.length, 1e-12);
  EXPECT_NEAR(geo.shortest(m, b).length, 0.5 * path.length, 1e-12);
}

TEST(PolyGeodesics, NeverShorterThanTheChartDistanceOnAFlatComplex) {
  // Any path in a flat disc is at least the straight-line distance of its
  // endpoints in the developed plane; Steiner paths only overestimate.
  const PolyComplex w = flat_square(5);
  const SteinerGraph g(w, 2);
  const PolyGeodesics steiner_only(g, false);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int ta = static_cast<int>(rng.index(32));
    const int tb = static_cast<int>(rng.index(32));
    const auto wa = random_weights(rng);
    const auto wb = random_weights(rng);
    const Vec2 ua = uv_of(w, ta, wa);
    const Vec2 ub = uv_of(w, tb, wb);
    const PolyPath p = steiner_only.shortest(poly_point(w, ta, wa), poly_point(w, tb, wb));
    EXPECT_FALSE(p.taut && ta != tb);
    EXPECT_GE(p.length, std::hypot(ua.u - ub.u, ua.v - ub.v) - 1e-12);
  }
}

TEST(RegularizedLengths, OnlyDegenerateTrianglesMove) {
  // Two triangles sharing edge {0, 1}: (0, 1, 2) is flat, (0, 1, 3) is not.
  auto mesh = share(DiscMesh::from_triangles({{0, 0}, {1, 0}, {0.5, 0.5}, {0.5, -1.0}}, {{0, 2, 1}, {0, 1, 3}}));
  std::vector<double> lengths(mesh->edge_count());
  lengths[mesh->edge_id(0, 1)] = 2.0;
  lengths[mesh->edge_id(0, 2)] = 1.0;
  lengths[mesh->edge_id(1, 2)] = 1.0;
  lengths[mesh->edge_id(0, 3)] = 1.5;
  lengths[mesh->edge_id(1, 3)] = 1.5;
  int touched = 0;
  const std::vector<double> out = regularized_lengths(*mesh, lengths, 1e-3, &touched);
  EXPECT_EQ(touched, 1);
  EXPECT_DOUBLE_EQ(out[mesh->edge_id(0, 2)], 1.0 + 1e-3);
  EXPECT_DOUBLE_EQ(out[mesh->edge_id(0, 1)], 2.0 + 1e-3);
  EXPECT_DOUBLE_EQ(out[mesh->edge_id(0, 3)], 1.5);
  const PolyComplex w = PolyComplex::glue(mesh, out, Kappa(0.0));
  EXPECT_EQ(w.degenerate_count(Degeneracy::flat), 0);
}

TEST(ChartPoint, FlatWeightsAreAffine) {
  const Kappa k(0.0);
  const std::array<ModelPoint, 3> v{planar_point(0, 0), planar_point(2, 0), planar_point(0, 3)};
  const ModelPoint p = chart_point(k, v, {0.5, 0.25, 0.25});
  EXPECT_NEAR(p.coords.x, 0.5, 1e-15);
  EXPECT_NEAR(p.coords.y, 0.75, 1e-15);
}
