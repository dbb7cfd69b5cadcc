#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catdisc/defaults.hpp"
#include "catdisc/graph_minimizer.hpp"
#include "catdisc/mesh.hpp"
#include "catdisc/poly_complex.hpp"

namespace catdisc {

// The maps p: mesh vertices -> W and q: W -> Y. q is realized on every
// triangle by iterated geodesics in Y with the same barycentric weights that
// place the point in its chart, and stored on the grid of weights
// (i, j, k) / grid_size with i + j + k = grid_size.
struct DiscreteMapPair {
  struct Sample {
    std::array<int, 3> weights{};
    PolyPoint point;
    TargetPoint image;
  };

  std::vector<PolyPoint> vertex_points;      // p, per mesh vertex
  int grid_size = defaults::q_grid;
  std::vector<std::vector<Sample>> samples;  // per triangle

  // q at a barycentric point of triangle t.
  TargetPoint image(const MappedGraph& mg, int triangle, const std::array<double, 3>& weights) const;
};

struct BuildOptions {
  std::optional<double> epsilon;  // default: the largest triangle side
  int q_grid = defaults::q_grid;
};

struct BuiltDisc {
  PolyComplex complex;
  DiscreteMapPair maps;
  double epsilon = 0.0;
  double chart_kappa = 0.0;
};

// Glues one comparison triangle per mesh triangle with sides the image
// distances of its vertices, at the chart curvature `kappa`. Throws
// Error(epsilon_bound) naming the first triangle with a side above epsilon,
// and when epsilon >= R_kappa / 2.
BuiltDisc build_polyhedral_disc(const MappedGraph& mg, Kappa kappa, const BuildOptions& options = {});

// Corner-angle sums at the interior vertices of W (classes without a
// boundary vertex), from the stored triangle angles. Collapsed and point
// triangles contribute nothing.
AngleReport interior_angle_check(const PolyComplex& w);

struct SideCoherenceReport {
  double max_error = 0.0;  // |side - induced distance|
  bool passed = true;
};

SideCoherenceReport side_coherence_check(const PolyComplex& w, const MappedGraph& mg,
                                         double tolerance = defaults::side_coherence);

struct CornerComparisonReport {
  double probe_scale = 0.0;
  int corners = 0;
  double worst_margin = 0.0;  // min of (corner angle - measured angle)
  int worst_triangle = -1;
  bool passed = true;
};

// Every corner of a comparison triangle must be at least the angle between
// the image geodesics, measured as a comparison angle at `probe_scale`
// (<= 0: probe_scale_factor times the mean edge length).
CornerComparisonReport corner_angle_comparison(const PolyComplex& w, const MappedGraph& mg, double probe_scale = 0.0,
                                               double slack = defaults::angle_comparison_slack);

struct LipschitzReport {
  int pairs = 0;
  double max_ratio = 0.0;  // d_Y(q a, q b) / d_W(a, b)
  double slack = 0.0;
  int edges_checked = 0;
  double max_edge_shortfall = 0.0;  // max of l_W(p e) - l_Y(f e) over mesh edges
  bool passed = true;
};

// Sampled pairs of q grid points; W distances are taut shortest paths.
// Path lengths are additive, so the length comparison on mesh-edge paths
// reduces to single edges.
LipschitzReport lipschitz_check(const DiscreteMapPair& maps, const PolyComplex& w, const MappedGraph& mg, int pairs,
                                std::uint64_t seed, int refinement = defaults::steiner_refinement,
                                double slack = defaults::lipschitz_slack);

struct DensityReport {
  int samples = 0;
  double epsilon = 0.0;
  double slack = 0.0;
  double max_distance = 0.0;  // to the nearest vertex of p
  bool passed = true;
};

// Random points of W; distances by one multi-source Steiner search from all
// of p's vertices. The slack is the Steiner spacing of the longest side.
DensityReport epsilon_density_check(const DiscreteMapPair& maps, const PolyComplex& w, double epsilon, int samples,
                                    std::uint64_t seed, int refinement = defaults::steiner_refinement);

struct FiberReport {
  int classes = 0;
  int disconnected = 0;
  bool passed = true;
};

// Mesh vertices sent to one point of W must span a connected sub-mesh.
FiberReport fiber_connectivity_check(const PolyComplex& w);

struct LoopProbeReport {
  bool ran = false;  // only for positive chart curvature
  int loops = 0;
  int collapsed = 0;
  int stabilized = 0;  // stopped shrinking at positive length
  int unresolved = 0;  // still shrinking at the iteration cap
  double shortest_stabilized = 0.0;  // +inf when none
  double length_bound = 0.0;         // 2 R_kappa
  bool found_short_geodesic = false;
};

// Falsification probe for short closed geodesics: random closed edge loops
// shorter than 2 R_kappa are resampled to eight points and smoothed by
// alternating midpoint replacement. A loop that stops shrinking at positive
// length is reported. This cannot prove the absence of such geodesics.
LoopProbeReport closed_geodesic_probe(const PolyComplex& w, int loops, int iterations, std::uint64_t seed,
                                      int refinement = 2);

struct PolyCertificate {
  AngleReport interior;
  LoopProbeReport loops;
  bool certified = false;
  std::string statement;
};

PolyCertificate certify_complex(const PolyComplex& w, int loops, int iterations, std::uint64_t seed);

}  // namespace catdisc
