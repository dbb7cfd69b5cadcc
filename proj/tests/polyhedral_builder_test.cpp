#include "catdisc/polyhedral_builder.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "catdisc/error.hpp"

using namespace catdisc;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const DiscMesh> share(DiscMesh m) { return std::make_shared<const DiscMesh>(std::move(m)); }

MappedGraph identity_square(int n) {
  auto mesh = share(DiscMesh::grid(n, n));
  std::vector<TargetPoint> images;
  for (const Vec2& p : mesh->uv()) images.push_back(EuclideanPoint{{p.u, p.v}});
  return MappedGraph::make(mesh, TargetSpace::euclidean(2), images);
}

MappedGraph relaxed_hexagon() {
  auto mesh = share(DiscMesh::fan(6));
  std::vector<TargetPoint> images;
  for (const Vec2& p : mesh->uv()) images.push_back(EuclideanPoint{{p.u, p.v}});
  images[0] = EuclideanPoint{{0.3, -0.1}};
  return relax_graph(MappedGraph::make(mesh, TargetSpace::euclidean(2), images), RelaxConfig{}).graph;
}

PolyComplex equilateral_fan(int spokes) {
  auto mesh = share(DiscMesh::fan(spokes));
  return PolyComplex::glue(mesh, std::vector<double>(mesh->edge_count(), 1.0), Kappa(0.0));
}

}  // namespace

TEST(BuildPolyhedral, UnitSquareIsIsometric) {
  const MappedGraph mg = identity_square(2);
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(0.0));
  EXPECT_TRUE(side_coherence_check(b.complex, mg).passed);
  const AngleReport interior = interior_angle_check(b.complex);
  EXPECT_TRUE(interior.vertices.empty());
  EXPECT_TRUE(interior.passes(defaults::interior_angle_tolerance));
  const LipschitzReport lip = lipschitz_check(b.maps, b.complex, mg, 1000, 1);
  EXPECT_NEAR(lip.max_ratio, 1.0, 1e-9);
  EXPECT_TRUE(lip.passed);
  EXPECT_TRUE(corner_angle_comparison(b.complex, mg).passed);
}

TEST(BuildPolyhedral, ConstantMapGivesAPoint) {
  auto mesh = share(DiscMesh::grid(3, 3));
  const MappedGraph mg = MappedGraph::make(mesh, TargetSpace::euclidean(2),
                                           std::vector<TargetPoint>(9, EuclideanPoint{{0.5, 0.5}}));
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(0.0));
  EXPECT_EQ(b.complex.vertex_count(), 1);
  EXPECT_EQ(b.complex.degenerate_count(Degeneracy::point), mesh->triangle_count());
  const LipschitzReport lip = lipschitz_check(b.maps, b.complex, mg, 100, 2);
  EXPECT_TRUE(lip.passed);
  EXPECT_EQ(lip.max_ratio, 0.0);
  const DensityReport dens = epsilon_density_check(b.maps, b.complex, b.epsilon, 100, 3);
  EXPECT_TRUE(dens.passed);
  EXPECT_EQ(dens.max_distance, 0.0);
  EXPECT_TRUE(fiber_connectivity_check(b.complex).passed);
}

TEST(BuildPolyhedral, RelaxedHexagonFanIsFlatAtTheCenter) {
  const MappedGraph mg = relaxed_hexagon();
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(0.0));
  const AngleReport interior = interior_angle_check(b.complex);
  ASSERT_EQ(interior.vertices.size(), 1u);
  EXPECT_NEAR(interior.vertices[0].sum, 2.0 * pi, 1e-6);
  const LipschitzReport lip = lipschitz_check(b.maps, b.complex, mg, 1000, 4);
  EXPECT_LE(lip.max_ratio, 1.0 + 1e-3);
  EXPECT_TRUE(lip.passed);
}

TEST(InteriorAngleCheck, EquilateralFans) {
  const AngleReport three = interior_angle_check(equilateral_fan(3));
  EXPECT_NEAR(three.vertices.at(0).sum, pi, 1e-12);
  EXPECT_FALSE(three.passes(defaults::interior_angle_tolerance));

  const AngleReport six = interior_angle_check(equilateral_fan(6));
  EXPECT_NEAR(six.vertices.at(0).sum, 2.0 * pi, 1e-12);
  EXPECT_TRUE(six.passes(defaults::interior_angle_tolerance));

  const AngleReport seven = interior_angle_check(equilateral_fan(7));
  EXPECT_NEAR(seven.vertices.at(0).sum, 7.0 * pi / 3.0, 1e-12);
  EXPECT_TRUE(seven.passes(defaults::interior_angle_tolerance));
}

TEST(EpsilonDensity, SingleTriangleWithItsDiameter) {
  auto mesh = share(DiscMesh::from_triangles({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}));
  const MappedGraph mg = MappedGraph::make(
      mesh, TargetSpace::euclidean(2), {EuclideanPoint{{0, 0}}, EuclideanPoint{{1, 0}}, EuclideanPoint{{0, 1}}});
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(0.0));
  EXPECT_TRUE(epsilon_density_check(b.maps, b.complex, std::sqrt(2.0), 500, 5).passed);
}

TEST(EpsilonDensity, SquareAtMeshSize) {
  const MappedGraph mg = identity_square(6);
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(0.0));
  const DensityReport dens = epsilon_density_check(b.maps, b.complex, 0.2, 2000, 6);
  EXPECT_TRUE(dens.passed);
  EXPECT_LE(dens.max_distance, 0.2 * std::sqrt(0.5) + 1e-9);
}

TEST(BuildPolyhedral, EpsilonBelowLongestSideThrows) {
  BuildOptions opts;
  opts.epsilon = 0.1;
  try {
    build_polyhedral_disc(identity_square(4), Kappa(0.0), opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::epsilon_bound);
  }
}

TEST(BuildPolyhedral, EpsilonAboveHalfDiameterBoundThrows) {
  auto mesh = share(DiscMesh::grid(2, 2));
  std::vector<TargetPoint> images{ModelPoint{{1, 0, 0}}, ModelPoint{{0, 1, 0}}, ModelPoint{{0, 0, 1}},
                                  ModelPoint{{-1, 0, 0}}};
  const MappedGraph mg = MappedGraph::make(mesh, TargetSpace::model(1.0), images);
  EXPECT_THROW(build_polyhedral_disc(mg, Kappa(1.0)), Error);
}

TEST(BuildPolyhedral, QAgreesWithTheMapOnVertices) {
  MappedGraph mg = identity_square(4);
  for (int v : mg.free_vertices()) {
    const auto& p = std::get<EuclideanPoint>(mg.images[v]).x;
    mg.images[v] = EuclideanPoint{{p[0] + 0.05 * p[1], p[1] * p[1]}};
  }
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(0.0));
  for (int t = 0; t < mg.mesh->triangle_count(); ++t) {
    for (int k = 0; k < 3; ++k) {
      std::array<double, 3> w{};
      w[k] = 1.0;
      const int v = mg.mesh->triangles()[t][k];
      EXPECT_LE(mg.space.distance(b.maps.image(mg, t, w), mg.images[v]), 1e-12);
    }
  }
  EXPECT_TRUE(side_coherence_check(b.complex, mg).passed);
}

TEST(BuildPolyhedral, RelaxedGridCertifiesFlat) {
  const MappedGraph mg = relax_graph(identity_square(6), RelaxConfig{}).graph;
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(0.0));
  EXPECT_TRUE(side_coherence_check(b.complex, mg).passed);
  EXPECT_TRUE(corner_angle_comparison(b.complex, mg).passed);
  EXPECT_TRUE(fiber_connectivity_check(b.complex).passed);
  const PolyCertificate cert = certify_complex(b.complex, 50, 20, 7);
  EXPECT_TRUE(cert.certified);
  EXPECT_FALSE(cert.loops.ran);
  EXPECT_NE(cert.statement.find("CAT(0)"), std::string::npos);
}

TEST(ClosedGeodesicProbe, RunsOnlyForPositiveCurvature) {
  auto mesh = share(DiscMesh::grid(4, 4));
  std::vector<TargetPoint> images;
  for (const Vec2& p : mesh->uv()) images.push_back(model_polar(Kappa(1.0), 0.3 * std::hypot(p.u, p.v), p.v + 0.1));
  const MappedGraph mg = MappedGraph::make(mesh, TargetSpace::model(1.0), images);
  const BuiltDisc b = build_polyhedral_disc(mg, Kappa(1.0));
  const LoopProbeReport probe = closed_geodesic_probe(b.complex, 50, 30, 8);
  EXPECT_TRUE(probe.ran);
  EXPECT_NEAR(probe.length_bound, 2.0 * pi, 1e-12);
  EXPECT_FALSE(probe.found_short_geodesic);
  EXPECT_FALSE(closed_geodesic_probe(build_polyhedral_disc(identity_square(3), Kappa(0.0)).complex, 10, 10, 9).ran);
}
