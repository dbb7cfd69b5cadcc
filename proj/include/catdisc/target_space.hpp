#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "catdisc/model_surface.hpp"

namespace catdisc {

struct EuclideanPoint {
  std::vector<double> x;
  friend bool operator==(const EuclideanPoint&, const EuclideanPoint&) = default;
};

// A point on edge `edge` of a metric tree, at `offset` from the edge's first
// endpoint.
struct TreePoint {
  int edge = 0;
  double offset = 0.0;
  friend bool operator==(const TreePoint&, const TreePoint&) = default;
};

// Polar coordinates on a flat cone; `angle` lives in [0, theta).
struct ConePoint {
  double radius = 0.0;
  double angle = 0.0;
  friend bool operator==(const ConePoint&, const ConePoint&) = default;
};

using TargetPoint = std::variant<ModelPoint, EuclideanPoint, TreePoint, ConePoint>;

struct TreeEdge {
  int u = 0;
  int v = 0;
  double weight = 0.0;
};

class MetricTree {
 public:
  explicit MetricTree(std::vector<TreeEdge> edges);

  int vertex_count() const { return static_cast<int>(parent_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<TreeEdge>& edges() const { return edges_; }

  // A representation of tree vertex v as a TreePoint.
  TreePoint vertex_point(int v) const;

  // Point at distance `offset` from `from` along the edge {from, to}.
  TreePoint point_on(int from, int to, double offset) const;

  double vertex_distance(int a, int b) const;
  double distance(const TreePoint& p, const TreePoint& q) const;
  TreePoint geodesic(const TreePoint& p, const TreePoint& q, double t) const;

  // Exact minimizer of sum_i w_i d(x, p_i)^power for power 1 or 2; the
  // objective restricted to any edge is piecewise linear (power 1) or
  // quadratic (power 2) in the offset, so each edge is solved in closed form.
  TreePoint minimize_power_sum(std::span<const TreePoint> points, std::span<const double> weights, int power) const;

  void validate(const TreePoint& p) const;

 private:
  std::vector<int> vertex_path(int a, int b) const;
  int lca(int a, int b) const;
  int edge_between(int a, int b) const;
  // True if p lies in the subtree hanging below vertex `child` (edge e excluded).
  bool in_subtree(const TreePoint& p, int child) const;

  std::vector<TreeEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;  // (neighbor, edge)
  std::vector<int> parent_;
  std::vector<int> parent_edge_;
  std::vector<int> level_;
  std::vector<double> depth_;
  std::vector<int> tin_;
  std::vector<int> tout_;
};

enum class BackendKind { model, euclidean, tree, cone };

const char* to_string(BackendKind kind);

struct GeodesicResult {
  TargetPoint point;
  bool unique = true;
};

// A geodesic metric space oracle. Values are immutable and cheap to copy.
class TargetSpace {
 public:
  static TargetSpace model(double kappa);
  static TargetSpace euclidean(int dim);
  static TargetSpace tree(std::vector<TreeEdge> edges);
  static TargetSpace cone(double theta);

  BackendKind kind() const;
  std::string describe() const;

  // The kappa this backend is CAT(kappa) for, if any. Trees report 0 (they
  // are CAT(kappa) for every kappa); cones with theta < 2 pi report nothing.
  std::optional<double> curvature_bound() const;

  // R_kappa of the backend's own curvature: finite only for spheres.
  double diameter_bound() const;

  const Kappa* model_kappa() const;
  int euclidean_dim() const;
  const MetricTree* as_tree() const;
  double cone_angle() const;

  void validate(const TargetPoint& p) const;

  double distance(const TargetPoint& p, const TargetPoint& q) const;
  GeodesicResult geodesic_checked(const TargetPoint& p, const TargetPoint& q, double t) const;
  TargetPoint geodesic(const TargetPoint& p, const TargetPoint& q, double t) const {
    return geodesic_checked(p, q, t).point;
  }
  double curve_length(std::span<const TargetPoint> polyline) const;

  // Minimizer of sum_i w_i d(x, p_i)^2. Throws Error(out_of_convexity) when
  // the points do not fit in a ball of radius < R_kappa / 2.
  TargetPoint local_barycenter(std::span<const TargetPoint> points, std::span<const double> weights) const;

  // Smallest r such that the points lie in the ball of radius r around one of
  // a few candidate centers (each point, and the midpoint of a farthest
  // pair). Returns the center too.
  std::pair<TargetPoint, double> enclosing_ball(std::span<const TargetPoint> points) const;

 private:
  struct ModelBackend {
    Kappa kappa;
  };
  struct EuclideanBackend {
    int dim;
  };
  struct ConeBackend {
    double theta;
  };
  using Backend = std::variant<ModelBackend, EuclideanBackend, MetricTree, ConeBackend>;

  explicit TargetSpace(Backend backend) : backend_(std::make_shared<const Backend>(std::move(backend))) {}

  std::shared_ptr<const Backend> backend_;
};

// Golden-section minimization of a function along geodesics from `start`
// toward each of `directions`, repeated until no step improves by more than
// `tol`. Only needs distance and geodesic, so it works on every backend.
TargetPoint geodesic_coordinate_search(const TargetSpace& space, const TargetPoint& start,
                                       std::span<const TargetPoint> directions,
                                       const std::function<double(const TargetPoint&)>& objective, double tol,
                                       int max_rounds);

}  // namespace catdisc
