#include "catdisc/model_surface.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "catdisc/error.hpp"
#include "catdisc/rng.hpp"

using namespace catdisc;

namespace {

constexpr double pi = std::numbers::pi;

ModelPoint random_point(Kappa k, Rng& rng, double max_dist) {
  return model_polar(k, rng.uniform(0.0, max_dist), rng.uniform(0.0, 2.0 * pi));
}

double max_dist_for(Kappa k) { return k.sign() > 0 ? 0.45 * k.diameter_bound() : 2.0; }

class PerKappa : public ::testing::TestWithParam<double> {};

}  // namespace

TEST(ModelDistance, PlanarThreeFourFive) {
  const Kappa k(0.0);
  EXPECT_NEAR(model_distance(k, planar_point(0, 0), planar_point(3, 4)), 5.0, 1e-15);
}

TEST(ModelDistance, PoleToEquatorIsQuarterCircle) {
  const Kappa k(1.0);
  const ModelPoint pole = model_base_point(k);
  const ModelPoint equator{{1.0, 0.0, 0.0}};
  EXPECT_NEAR(model_distance(k, pole, equator), pi / 2.0, 1e-15);
}

TEST(ModelDistance, HyperboloidUnitDistance) {
  const Kappa k(-1.0);
  const ModelPoint base = model_base_point(k);
  const ModelPoint q{{std::sinh(1.0), 0.0, std::cosh(1.0)}};
  const double minkowski = base.coords.x * q.coords.x + base.coords.y * q.coords.y - base.coords.z * q.coords.z;
  ASSERT_NEAR(minkowski, -std::cosh(1.0), 1e-15);
  EXPECT_NEAR(model_distance(k, base, q), 1.0, 1e-14);
}

TEST(GeodesicPoint, PlanarQuarter) {
  const ModelPoint m = geodesic_point(Kappa(0.0), planar_point(0, 0), planar_point(2, 0), 0.25);
  EXPECT_NEAR(m.coords.x, 0.5, 1e-15);
  EXPECT_NEAR(m.coords.y, 0.0, 1e-15);
}

TEST(GeodesicPoint, PoleToEquatorMidpointAtLatitude45) {
  const Kappa k(1.0);
  const ModelPoint m = geodesic_point(k, model_base_point(k), ModelPoint{{1.0, 0.0, 0.0}}, 0.5);
  EXPECT_NEAR(std::asin(m.coords.z), pi / 4.0, 1e-14);
}

TEST(GeodesicPoint, AntipodesRejected) {
  const Kappa k(1.0);
  EXPECT_THROW(geodesic_point(k, ModelPoint{{0, 0, 1}}, ModelPoint{{0, 0, -1}}, 0.5), Error);
}

TEST(AngleFromSides, Examples) {
  EXPECT_NEAR(angle_from_sides(Kappa(0.0), 1, 1, 1), pi / 3.0, 1e-15);
  EXPECT_NEAR(angle_from_sides(Kappa(1.0), pi / 2, pi / 2, pi / 2), pi / 2.0, 1e-14);
  EXPECT_NEAR(angle_from_sides(Kappa(0.0), 3, 4, 5), pi / 2.0, 1e-15);
}

TEST(ComparisonTriangle, RightTriangle) {
  const Kappa k(0.0);
  const ComparisonTriangle t = build_comparison_triangle(k, 3, 4, 5);
  EXPECT_EQ(t.degeneracy, Degeneracy::none);
  EXPECT_NEAR(t.angles[0], pi / 2.0, 1e-14);
  EXPECT_NEAR(model_distance(k, t.vertices[0], t.vertices[1]), 3.0, 1e-14);
  EXPECT_NEAR(model_distance(k, t.vertices[0], t.vertices[2]), 4.0, 1e-14);
  EXPECT_NEAR(model_distance(k, t.vertices[1], t.vertices[2]), 5.0, 1e-14);
}

TEST(ComparisonTriangle, SphericalOctant) {
  const Kappa k(1.0);
  const ComparisonTriangle t = build_comparison_triangle(k, pi / 2, pi / 2, pi / 2);
  for (double a : t.angles) EXPECT_NEAR(a, pi / 2.0, 1e-14);
}

TEST(ComparisonTriangle, CollapsedSideIdentifiesTwoVertices) {
  for (double kv : {-1.0, 0.0, 1.0}) {
    const Kappa k(kv);
    const ComparisonTriangle t = build_comparison_triangle(k, 0.7, 0.0, 0.7);
    EXPECT_EQ(t.degeneracy, Degeneracy::collapsed);
    EXPECT_NEAR(model_distance(k, t.vertices[0], t.vertices[2]), 0.0, 1e-15);
    EXPECT_NEAR(model_distance(k, t.vertices[0], t.vertices[1]), 0.7, 1e-14);
  }
}

TEST(ComparisonTriangle, FlatIsCollinear) {
  const Kappa k(0.0);
  const ComparisonTriangle t = build_comparison_triangle(k, 1.0, 2.0, 1.0);
  EXPECT_EQ(t.degeneracy, Degeneracy::flat);
  EXPECT_DOUBLE_EQ(t.angles[1], pi);
  EXPECT_NEAR(model_distance(k, t.vertices[1], t.vertices[2]), 1.0, 1e-15);
}

TEST(ComparisonTriangle, AllZeroIsPoint) {
  EXPECT_EQ(build_comparison_triangle(Kappa(1.0), 0, 0, 0).degeneracy, Degeneracy::point);
}

TEST(ComparisonTriangle, TriangleInequalityViolationThrows) {
  try {
    build_comparison_triangle(Kappa(0.0), 1.0, 1.0, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::triangle_inequality);
  }
}

TEST(ComparisonTriangle, TooLargeSphericalTriangleThrows) {
  EXPECT_THROW(build_comparison_triangle(Kappa(1.0), 2.5, 2.5, 2.5), Error);
}

TEST(ValidatePoint, OffQuadricRejected) {
  EXPECT_THROW(validate_point(Kappa(1.0), ModelPoint{{0.5, 0.0, 0.0}}), Error);
  EXPECT_THROW(validate_point(Kappa(0.0), ModelPoint{{0.0, 0.0, 1.0}}), Error);
  EXPECT_NO_THROW(validate_point(Kappa(-1.0), model_polar(Kappa(-1.0), 1.5, 0.3)));
}

TEST_P(PerKappa, LawOfCosinesRoundTrip) {
  const Kappa k(GetParam());
  Rng rng(11);
  const double cap = k.sign() > 0 ? 0.3 * k.diameter_bound() : 3.0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a = rng.uniform(0.05, cap);
    const double b = rng.uniform(0.05, cap);
    const double gamma = rng.uniform(0.05, pi - 0.05);
    const double c = side_from_angle(k, a, b, gamma);
    worst = std::max(worst, std::abs(angle_from_sides(k, a, b, c) - gamma));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST_P(PerKappa, GeodesicAdditivity) {
  const Kappa k(GetParam());
  Rng rng(12);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ModelPoint p = random_point(k, rng, max_dist_for(k));
    const ModelPoint q = random_point(k, rng, max_dist_for(k));
    const double t = rng.uniform();
    const ModelPoint m = geodesic_point(k, p, q, t);
    const double d = model_distance(k, p, q);
    worst = std::max(worst, std::abs(model_distance(k, p, m) - t * d));
    worst = std::max(worst, std::abs(model_distance(k, p, m) + model_distance(k, m, q) - d));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST_P(PerKappa, ComparisonTriangleRealizesSides) {
  const Kappa k(GetParam());
  Rng rng(13);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ModelPoint p = random_point(k, rng, max_dist_for(k));
    const ModelPoint q = random_point(k, rng, max_dist_for(k));
    const ModelPoint r = random_point(k, rng, max_dist_for(k));
    const double a = model_distance(k, p, q);
    const double b = model_distance(k, p, r);
    const double c = model_distance(k, q, r);
    const ComparisonTriangle t = build_comparison_triangle(k, a, b, c);
    worst = std::max(worst, std::abs(model_distance(k, t.vertices[0], t.vertices[1]) - a));
    worst = std::max(worst, std::abs(model_distance(k, t.vertices[0], t.vertices[2]) - b));
    worst = std::max(worst, std::abs(model_distance(k, t.vertices[1], t.vertices[2]) - c));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST_P(PerKappa, ExpOfLogReturnsTarget) {
  const Kappa k(GetParam());
  Rng rng(14);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const ModelPoint p = random_point(k, rng, max_dist_for(k));
    const ModelPoint q = random_point(k, rng, max_dist_for(k));
    const Vec3 v = model_log(k, p, q);
    worst = std::max(worst, std::abs(tangent_norm(k, v) - model_distance(k, p, q)));
    worst = std::max(worst, model_distance(k, model_exp(k, p, v), q));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST_P(PerKappa, GeodesicEndpoints) {
  const Kappa k(GetParam());
  Rng rng(15);
  const ModelPoint p = random_point(k, rng, 1.0);
  const ModelPoint q = random_point(k, rng, 1.0);
  EXPECT_LE(model_distance(k, geodesic_point(k, p, q, 0.0), p), 1e-14);
  EXPECT_LE(model_distance(k, geodesic_point(k, p, q, 1.0), q), 1e-14);
}

INSTANTIATE_TEST_SUITE_P(Curvatures, PerKappa, ::testing::Values(-1.0, 0.0, 1.0),
                         [](const auto& info) {
                           return info.param < 0 ? std::string("negative")
                                                 : (info.param > 0 ? std::string("positive") : std::string("zero"));
                         });
