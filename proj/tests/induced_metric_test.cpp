#include "catdisc/induced_metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>

#include <gtest/gtest.h>

#include "catdisc/error.hpp"
#include "catdisc/rng.hpp"

using namespace catdisc;

namespace {

std::shared_ptr<const DiscMesh> share(DiscMesh m) { return std::make_shared<const DiscMesh>(std::move(m)); }

MappedGraph planar_grid(int n, const std::function<std::vector<double>(double, double)>& f, int dim) {
  auto mesh = share(DiscMesh::grid(n, n));
  std::vector<TargetPoint> images;
  for (const Vec2& p : mesh->uv()) images.push_back(EuclideanPoint{f(p.u, p.v)});
  return MappedGraph::make(mesh, TargetSpace::euclidean(dim), std::move(images));
}

// Floyd-Warshall over explicitly supplied edge weights.
std::vector<double> floyd(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(static_cast<std::size_t>(n) * n, inf);
  for (int v = 0; v < n; ++v) d[v * n + v] = 0.0;
  for (auto [u, v, w] : edges) {
    d[u * n + v] = std::min(d[u * n + v], w);
    d[v * n + u] = std::min(d[v * n + u], w);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    }
  }
  return d;
}

}  // namespace

TEST(InducedLengthMetric, ConstantMapIsOneClass) {
  const MappedGraph mg = planar_grid(5, [](double, double) { return std::vector<double>{0.2, 0.7}; }, 2);
  const QuotientMetric qm = induced_length_metric(mg);
  EXPECT_EQ(qm.class_count(), 1);
  EXPECT_EQ(qm.distance(0, 0), 0.0);
}

TEST(InducedLengthMetric, AxisGridIsTaxicab) {
  const int n = 6;
  std::vector<Edge> edges;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i + 1 < n) edges.emplace_back(j * n + i, j * n + i + 1);
      if (j + 1 < n) edges.emplace_back(j * n + i, (j + 1) * n + i);
    }
  }
  auto mesh = share(DiscMesh::from_edges(n * n, edges));
  std::vector<TargetPoint> images;
  for (int v = 0; v < n * n; ++v) images.push_back(EuclideanPoint{{(v % n) / 5.0, (v / n) / 5.0}});
  std::vector<char> fixed(n * n, 0);
  fixed[0] = 1;
  const QuotientMetric qm = induced_length_metric(MappedGraph::make(mesh, TargetSpace::euclidean(2), images, fixed));
  ASSERT_EQ(qm.class_count(), n * n);
  for (int a = 0; a < n * n; ++a) {
    for (int b = 0; b < n * n; ++b) {
      const double taxicab = (std::abs(a % n - b % n) + std::abs(a / n - b / n)) / 5.0;
      EXPECT_NEAR(qm.vertex_distance(a, b), taxicab, 1e-12);
    }
  }
}

TEST(InducedLengthMetric, TriangulatedGridMatchesFloydOracle) {
  const MappedGraph mg = planar_grid(5, [](double u, double v) { return std::vector<double>{u, v * v}; }, 2);
  std::vector<std::tuple<int, int, double>> weighted;
  for (const Edge& e : mg.mesh->edges()) {
    const Vec2 a = mg.mesh->uv()[e.first];
    const Vec2 b = mg.mesh->uv()[e.second];
    weighted.emplace_back(e.first, e.second, std::hypot(a.u - b.u, a.v * a.v - b.v * b.v));
  }
  const std::vector<double> ref = floyd(mg.vertex_count(), weighted);
  const QuotientMetric qm = induced_length_metric(mg);
  for (int a = 0; a < mg.vertex_count(); ++a) {
    for (int b = 0; b < mg.vertex_count(); ++b) {
      EXPECT_NEAR(qm.vertex_distance(a, b), ref[a * mg.vertex_count() + b], 1e-12);
    }
  }
}

TEST(InducedLengthMetric, ProjectionCollapsesColumns) {
  const MappedGraph mg = planar_grid(8, [](double u, double) { return std::vector<double>{u}; }, 1);
  const QuotientMetric qm = induced_length_metric(mg);
  ASSERT_EQ(qm.class_count(), 8);
  for (int v = 0; v < 64; ++v) EXPECT_EQ(qm.vertex_class[v], qm.vertex_class[v % 8]);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(qm.vertex_distance(i, j), std::abs(i - j) / 7.0, 1e-12);
  }
  EXPECT_TRUE(monotone_quotient_check(*mg.mesh, qm).passed);
  EXPECT_EQ(monotone_quotient_check(*mg.mesh, qm).nontrivial_classes, 8);
}

TEST(InducedLengthMetric, DisconnectedGraphThrows) {
  auto mesh = share(DiscMesh::from_edges(4, {{0, 1}, {2, 3}}));
  std::vector<TargetPoint> images(4, EuclideanPoint{{0.0}});
  const MappedGraph mg = MappedGraph::make(mesh, TargetSpace::euclidean(1), images, std::vector<char>{1, 0, 0, 0});
  EXPECT_THROW(induced_length_metric(mg), Error);
}

TEST(ConnectingMetric, ZigZagPathHasDiameterOne) {
  auto mesh = share(DiscMesh::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
  std::vector<TargetPoint> images;
  for (double x : {0.0, 1.0, 0.0, 1.0, 0.0}) images.push_back(EuclideanPoint{{x}});
  const MappedGraph mg = MappedGraph::make(mesh, TargetSpace::euclidean(1), images, std::vector<char>{1, 0, 0, 0, 1});
  const ConnectingResult exact = connecting_metric(mg, 0, 4, ConnectingMode::exact);
  EXPECT_DOUBLE_EQ(exact.value, 1.0);
  const ConnectingResult approx = connecting_metric(mg, 0, 4, ConnectingMode::anchor2approx);
  EXPECT_LE(approx.value, 1.0);
  EXPECT_GE(approx.value, 0.5);
  EXPECT_EQ(connecting_metric(mg, 2, 2, ConnectingMode::exact).value, 0.0);
  // The length metric counts all four unit steps.
  EXPECT_DOUBLE_EQ(induced_length_metric(mg).vertex_distance(0, 4), 4.0);
}

TEST(ConnectingMetric, ConstantMapIsZero) {
  const MappedGraph mg = planar_grid(4, [](double, double) { return std::vector<double>{1.0, 1.0}; }, 2);
  for (int a = 0; a < 16; a += 3) {
    EXPECT_EQ(connecting_metric(mg, 0, a, ConnectingMode::exact).value, 0.0);
    EXPECT_EQ(connecting_metric(mg, 0, a, ConnectingMode::anchor2approx).value, 0.0);
  }
}

TEST(ConnectingMetric, ExactModeRefusesLargeGraphs) {
  const MappedGraph mg = planar_grid(5, [](double u, double v) { return std::vector<double>{u, v}; }, 2);
  EXPECT_THROW(connecting_metric(mg, 0, 24, ConnectingMode::exact), Error);
}

TEST(ConnectingMetric, AnchorBoundBracketsExactValue) {
  Rng rng(9);
  auto mesh = share(DiscMesh::grid(4, 4));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TargetPoint> images;
    for (int v = 0; v < 16; ++v) images.push_back(EuclideanPoint{{rng.uniform(), rng.uniform()}});
    const MappedGraph mg = MappedGraph::make(mesh, TargetSpace::euclidean(2), images);
    const int x = static_cast<int>(rng.index(16));
    const int z = static_cast<int>(rng.index(16));
    const double exact = connecting_metric(mg, x, z, ConnectingMode::exact).value;
    const double approx = connecting_metric(mg, x, z, ConnectingMode::anchor2approx).value;
    EXPECT_LE(approx, exact + 1e-12);
    EXPECT_GE(2.0 * approx, exact - 1e-12);
  }
}

TEST(CompareMetrics, ConnectingNeverExceedsLength) {
  const MappedGraph mg = planar_grid(4, [](double u, double v) { return std::vector<double>{u * v, u - v}; }, 2);
  const MetricComparison c = compare_metrics(mg, induced_length_metric(mg), 400, 1);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.violations, 0);
  EXPECT_EQ(c.mode, ConnectingMode::exact);
  EXPECT_LE(c.max_ratio, 1.0 + 1e-12);
}

TEST(CompareMetrics, TripodImageRatiosAtMostOne) {
  const TargetSpace tripod = TargetSpace::tree({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const MetricTree& tree = *tripod.as_tree();
  auto mesh = share(DiscMesh::grid(6, 6));
  std::vector<TargetPoint> images;
  for (const Vec2& p : mesh->uv()) {
    // Left half on leg 1, right half split between legs 2 and 3 by v.
    if (p.u <= 0.5) {
      images.push_back(tree.point_on(0, 1, 1.0 - 2.0 * p.u));
    } else {
      images.push_back(tree.point_on(0, p.v < 0.5 ? 2 : 3, 2.0 * p.u - 1.0));
    }
  }
  const MappedGraph mg = MappedGraph::make(mesh, tripod, images);
  const QuotientMetric qm = induced_length_metric(mg);
  const MetricComparison c = compare_metrics(mg, qm, 400, 2);
  EXPECT_TRUE(c.passed);
  EXPECT_LE(c.max_ratio, 1.0 + 1e-12);
  EXPECT_EQ(c.mode, ConnectingMode::anchor2approx);
  EXPECT_DOUBLE_EQ(c.approximation_factor, 2.0);
}

TEST(CompareMetrics, ConstantMapBothZero) {
  const MappedGraph mg = planar_grid(3, [](double, double) { return std::vector<double>{0.0}; }, 1);
  const MetricComparison c = compare_metrics(mg, induced_length_metric(mg), 100, 3);
  EXPECT_TRUE(c.passed);
  EXPECT_EQ(c.max_ratio, 0.0);
}

// The induced map from the quotient to the target is 1-Lipschitz and each
// class is connected, for random maps.
TEST(InducedMetricProperty, LipschitzAndMonotone) {
  Rng rng(21);
  auto mesh = share(DiscMesh::grid(7, 7));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TargetPoint> images;
    for (const Vec2& p : mesh->uv()) {
      // Snap some vertices together so nontrivial classes appear.
      const double x = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
      images.push_back(EuclideanPoint{{x * p.u, x * p.v}});
    }
    const MappedGraph mg = MappedGraph::make(mesh, TargetSpace::euclidean(2), images);
    const QuotientMetric qm = induced_length_metric(mg);
    EXPECT_LE(induced_map_lipschitz_excess(mg, qm), 1e-9);
    EXPECT_TRUE(monotone_quotient_check(*mesh, qm).passed);
    // Every edge's endpoints are at most its image length apart.
    for (int e = 0; e < mesh->edge_count(); ++e) {
      const auto [u, v] = mesh->edges()[e];
      EXPECT_LE(qm.vertex_distance(u, v), mg.edge_length(e) + 1e-15);
    }
  }
}

TEST(InducedMetricProperty, PathLengthsAreEdgeSums) {
  const MappedGraph mg = planar_grid(6, [](double u, double v) { return std::vector<double>{u, std::sin(3 * v)}; }, 2);
  const QuotientMetric qm = induced_length_metric(mg);
  const int n = 6;
  // Along the bottom row every edge is geodesic in the graph, so the class
  // distance from the corner is the running sum of edge lengths.
  double run = 0.0;
  for (int i = 1; i < n; ++i) {
    run += mg.edge_length(mg.mesh->edge_id(i - 1, i));
    EXPECT_NEAR(qm.vertex_distance(0, i), run, 1e-12);
  }
}

TEST(DistanceTableCsv, HeaderAndRows) {
  const MappedGraph mg = planar_grid(8, [](double u, double) { return std::vector<double>{u}; }, 1);
  const std::string csv = distance_table_csv(induced_length_metric(mg));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "class,0,1,2,3,4,5,6,7");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}
