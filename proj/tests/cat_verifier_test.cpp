#include "catdisc/cat_verifier.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "catdisc/json_io.hpp"
#include "oracles.hpp"

using namespace catdisc;

namespace {

constexpr double pi = std::numbers::pi;

std::shared_ptr<const DiscMesh> share(DiscMesh m) { return std::make_shared<const DiscMesh>(std::move(m)); }

double max_defect(const TripleOutcome& o) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : o.samples) worst = std::max(worst, s.defect);
  return worst;
}

double max_abs_defect(const TripleOutcome& o) {
  double worst = 0.0;
  for (const auto& s : o.samples) worst = std::max(worst, std::abs(s.defect));
  return worst;
}

MappedGraph identity_square(int n) {
  auto mesh = share(DiscMesh::grid(n, n));
  std::vector<TargetPoint> images;
  for (const Vec2& p : mesh->uv()) images.push_back(EuclideanPoint{{p.u, p.v}});
  return MappedGraph::make(mesh, TargetSpace::euclidean(2), images);
}

// Grid mapped onto the spherical cap of radius 1.2 around the north pole by
// the exponential map of the square [-1, 1]^2 scaled to fit.
MappedGraph spherical_cap(int n) {
  const Kappa k(1.0);
  auto mesh = share(DiscMesh::grid(n, n));
  std::vector<TargetPoint> images;
  for (const Vec2& p : mesh->uv()) {
    const double x = 2.0 * p.u - 1.0;
    const double y = 2.0 * p.v - 1.0;
    images.push_back(model_polar(k, 1.2 * std::hypot(x, y) / std::sqrt(2.0), std::atan2(y, x)));
  }
  return MappedGraph::make(mesh, TargetSpace::model(1.0), images);
}

InducedCertOptions quick(int triples = 60) {
  InducedCertOptions o;
  o.triple_budget = triples;
  o.grid = 8;
  return o;
}

}  // namespace

TEST(ThinnessDefect, EuclideanTripleIsExact) {
  const TargetSpace e = TargetSpace::euclidean(2);
  const TargetOracle o{e};
  const TripleOutcome out = thinness_defect(o, Kappa(0.0), TargetPoint{EuclideanPoint{{0, 0}}},
                                            TargetPoint{EuclideanPoint{{2, 0.3}}}, TargetPoint{EuclideanPoint{{0.4, 1.5}}}, 16);
  ASSERT_EQ(out.status, TripleStatus::evaluated);
  EXPECT_LE(max_abs_defect(out), 1e-9);
}

TEST(ThinnessDefect, SphericalTripleIsExact) {
  const TargetSpace s = TargetSpace::model(1.0);
  const Kappa k(1.0);
  const TargetOracle o{s};
  const TripleOutcome out =
      thinness_defect(o, k, TargetPoint{model_polar(k, 0.4, 0.1)}, TargetPoint{model_polar(k, 1.1, 2.0)},
                      TargetPoint{model_polar(k, 0.9, 4.0)}, 16);
  ASSERT_EQ(out.status, TripleStatus::evaluated);
  EXPECT_LE(max_abs_defect(out), 1e-9);
}

TEST(ThinnessDefect, NarrowConeApexTripleMatchesUnfoldingOracle) {
  const double theta = 1.5 * pi;
  const TargetSpace c = TargetSpace::cone(theta);
  const TargetOracle o{c};
  // Radius-1 points spread around the apex, pairwise gaps below pi.
  const oracle::Polar p{1.0, 0.0};
  const oracle::Polar q{1.0, 0.5 * pi};
  const oracle::Polar r{1.0, pi};
  const TripleOutcome out = thinness_defect(o, Kappa(0.0), TargetPoint{ConePoint{p.r, p.a}},
                                            TargetPoint{ConePoint{q.r, q.a}}, TargetPoint{ConePoint{r.r, r.a}}, 16);
  ASSERT_EQ(out.status, TripleStatus::evaluated);
  const double reference = oracle::cone_triple_defect(theta, p, q, r, 16);
  // Frozen from the oracle.
  EXPECT_NEAR(reference, 0.4082754411, 1e-9);
  EXPECT_NEAR(max_defect(out), reference, 1e-9);
  EXPECT_GT(max_defect(out), 0.05);
}

TEST(ThinnessDefect, ZeroSideIsDegenerate) {
  const TargetSpace e = TargetSpace::euclidean(1);
  const TargetOracle o{e};
  const TargetPoint a = EuclideanPoint{{0.0}};
  EXPECT_EQ(thinness_defect(o, Kappa(0.0), a, a, TargetPoint{EuclideanPoint{{1.0}}}, 4).status,
            TripleStatus::degenerate);
}

TEST(ThinnessDefect, LargeSphericalPerimeterIsSkipped) {
  const TargetSpace s = TargetSpace::model(1.0);
  const TargetOracle o{s};
  const TripleOutcome out = thinness_defect(o, Kappa(1.0), TargetPoint{ModelPoint{{1, 0, 0}}},
                                            TargetPoint{ModelPoint{{-0.6, 0.8, 0}}}, TargetPoint{ModelPoint{{-0.6, -0.8, 0}}}, 4);
  EXPECT_EQ(out.status, TripleStatus::perimeter);
}

TEST(CertifyCat, SelfComparisonOfModels) {
  for (double kv : {-1.0, 0.0, 1.0}) {
    const CertReport rep = certify_cat(TargetSpace::model(kv), Kappa(kv), 200, 16, 1e-9, 42);
    EXPECT_EQ(rep.triples_evaluated, 200) << kv;
    EXPECT_LE(rep.max_abs_defect, 1e-9) << kv;
    EXPECT_TRUE(rep.passed) << kv;
  }
}

TEST(CertifyCat, TripodIsCatZero) {
  const TargetSpace t = TargetSpace::tree({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const CertReport rep = certify_cat(t, Kappa(0.0), 200, 16, 1e-9, 43);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.max_defect, 1e-9);
}

TEST(CertifyCat, WideConePassesNarrowConeFails) {
  const CertReport wide = certify_cat(TargetSpace::cone(2.5 * pi), Kappa(0.0), 200, 16, 1e-6, 44);
  EXPECT_TRUE(wide.passed);
  const CertReport narrow = certify_cat(TargetSpace::cone(1.5 * pi), Kappa(0.0), 200, 16, 1e-6, 44);
  EXPECT_FALSE(narrow.passed);
  EXPECT_GT(narrow.max_defect, 0.05);
}

TEST(CertifyCat, SameSeedSameReport) {
  const TargetSpace c = TargetSpace::cone(1.5 * pi);
  const CertReport a = certify_cat(c, Kappa(0.0), 50, 8, 1e-6, 7);
  const CertReport b = certify_cat(c, Kappa(0.0), 50, 8, 1e-6, 7);
  EXPECT_EQ(to_json(a, true).dump(), to_json(b, true).dump());
  EXPECT_EQ(samples_csv(a), samples_csv(b));
  const CertReport other = certify_cat(c, Kappa(0.0), 50, 8, 1e-6, 8);
  EXPECT_NE(to_json(a, true).dump(), to_json(other, true).dump());
}

TEST(CertifyCatProperty, DefectsShrinkAsKappaGrows) {
  const std::vector<TargetSpace> spaces{TargetSpace::euclidean(3), TargetSpace::model(-1.0), TargetSpace::cone(1.5 * pi),
                                        TargetSpace::tree({{0, 1, 1.0}, {0, 2, 0.5}, {2, 3, 1.0}}),
                                        TargetSpace::model(1.0)};
  for (const TargetSpace& s : spaces) {
    EXPECT_LE(kappa_monotonicity_violation(s, Kappa(-1.0), Kappa(0.0), 60, 8, 5), 1e-12) << s.describe();
    EXPECT_LE(kappa_monotonicity_violation(s, Kappa(0.0), Kappa(1.0), 60, 8, 5), 1e-12) << s.describe();
  }
}

TEST(CertifyInduced, FlatSquarePassesAtEveryLevel) {
  for (int n : {4, 8}) {
    InducedCertOptions o = quick();
    o.mesh_level = n;
    const CertReport rep = certify_induced(identity_square(n), Kappa(0.0), o);
    EXPECT_TRUE(rep.passed) << n;
    EXPECT_LE(rep.max_abs_defect, 1e-9) << n;
    EXPECT_EQ(rep.untaut_paths, 0) << n;
    EXPECT_EQ(rep.mesh_level, n);
  }
}

TEST(CertifyInduced, SphericalCapPassesKappaOneFailsKappaZero) {
  const MappedGraph cap = spherical_cap(10);
  const CertReport one = certify_induced(cap, Kappa(1.0), quick());
  EXPECT_TRUE(one.passed) << one.max_defect;
  const CertReport zero = certify_induced(cap, Kappa(0.0), quick());
  EXPECT_FALSE(zero.passed);
  EXPECT_GT(zero.max_defect, defaults::defect_tolerance_mesh);
}

TEST(CertifyInduced, EdgeOnlyPathsAreReportedAsSuch) {
  InducedCertOptions o = quick(20);
  o.chords = false;
  o.taut = false;
  const CertReport rep = certify_induced(identity_square(5), Kappa(0.0), o);
  EXPECT_NE(rep.distance_source.find("edge paths"), std::string::npos);
  EXPECT_GT(rep.triples_evaluated, 0);
}

TEST(CertifyInduced, SameSeedSameReport) {
  const MappedGraph cap = spherical_cap(6);
  const CertReport a = certify_induced(cap, Kappa(1.0), quick(30));
  const CertReport b = certify_induced(cap, Kappa(1.0), quick(30));
  EXPECT_EQ(to_json(a, true).dump(), to_json(b, true).dump());
}

TEST(SamplesCsv, Header) {
  const CertReport rep = certify_cat(TargetSpace::euclidean(2), Kappa(0.0), 3, 4, 1e-6, 1);
  const std::string csv = samples_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "triple,s_index,t_index,s,t,measured,compared,defect");
  EXPECT_EQ(static_cast<int>(std::count(csv.begin(), csv.end(), '\n')), 1 + rep.sample_count);
}
