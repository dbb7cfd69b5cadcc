#pragma once

#include <string>
#include <vector>

#include "catdisc/defaults.hpp"
#include "catdisc/mesh.hpp"

namespace catdisc {

// `free` minimizes total edge length. `dominated` additionally never lets an
// edge grow beyond its input length, so the output is dominated by the input
// in the induced length order.
enum class RelaxMode { free, dominated };

const char* to_string(RelaxMode mode);

struct RelaxConfig {
  double tol_move = defaults::tol_move;
  int max_iters = defaults::max_iters;
  std::vector<int> sweep_order;  // empty: free vertices by ascending id
  RelaxMode mode = RelaxMode::free;
};

struct RelaxTraceRow {
  int sweep = 0;
  double total_length = 0.0;
  double max_move = 0.0;
};

struct RelaxResult {
  MappedGraph graph;
  bool converged = false;
  int sweeps = 0;
  int polish_accepted = 0;
  std::vector<RelaxTraceRow> trace;  // row 0 is the input
};

// Gauss-Seidel sweeps of per-vertex Fermat steps, then a simultaneous polish
// that is kept only if it shortens the graph. Fixed images are never written.
RelaxResult relax_graph(const MappedGraph& mg, const RelaxConfig& cfg);

// "sweep,total_length,max_move" rows.
std::string relax_trace_csv(const RelaxResult& result);

// Sum of edge image lengths, with compensated summation so that equal edge
// values always give equal totals.
double total_length(const MappedGraph& mg);

// Minimizer of sum_i w_i d(x, anchors_i) started from `start`.
TargetPoint geodesic_fermat_point(const TargetSpace& space, std::span<const TargetPoint> anchors,
                                  std::span<const double> weights, const TargetPoint& start);

// Max over edges of |polyline length - endpoint distance|. Edges without a
// stored polyline are sampled along the geodesic with `samples` points.
double edge_geodesic_defect(const MappedGraph& mg, int samples);

struct VertexAngles {
  int vertex = -1;
  std::vector<int> neighbors;        // cyclic order
  std::vector<double> angles;        // angles[k] between neighbors k and k+1
  std::vector<double> angles_half;   // same at half the probe scale
  std::vector<char> non_monotone;    // half-scale angle exceeds full-scale angle
  double sum = 0.0;
  double sum_half = 0.0;
  double defect = 0.0;  // max(0, 2 pi - sum)
  bool undefined = false;  // a zero-length incident edge
};

struct AngleReport {
  double probe_scale = 0.0;
  double comparison_kappa = 0.0;
  std::vector<VertexAngles> vertices;
  double min_sum = 0.0;
  double max_defect = 0.0;
  int undefined_vertices = 0;
  int non_monotone_pairs = 0;

  // True when every defined vertex has sum >= 2 pi - tolerance.
  bool passes(double tolerance) const;
};

// probe_scale <= 0 selects probe_scale_factor times the mean edge length.
AngleReport vertex_angle_sums(const MappedGraph& mg, double probe_scale = 0.0);

struct DominanceReport {
  bool holds = false;     // <.>_f >= <.>_g on every vertex pair
  bool strict = false;    // and > somewhere
  double max_shortfall = 0.0;  // max of <.>_g - <.>_f
  double max_gain = 0.0;       // max of <.>_f - <.>_g
};

// Throws Error(graph_mismatch) unless both maps share the mesh, and
// Error(fixed_set_mismatch) unless they agree on the fixed set.
DominanceReport dominates(const MappedGraph& f, const MappedGraph& g);

struct NonBubblingReport {
  int repeated_points = 0;      // image points hit by >= 3 vertices
  int components_checked = 0;
  int components_missing_fixed = 0;
  bool passed = true;
};

NonBubblingReport non_bubbling_check(const MappedGraph& mg);

struct ContainmentReport {
  double radius = 0.0;      // radius of the enclosing ball of the fixed images
  double max_excess = 0.0;  // max over images of distance to center - radius
  bool passed = true;
};

ContainmentReport containment_check(const MappedGraph& mg, double tolerance = 1e-8);

}  // namespace catdisc
