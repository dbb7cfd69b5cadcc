#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catdisc/defaults.hpp"
#include "catdisc/mesh.hpp"
#include "catdisc/target_space.hpp"

namespace catdisc {

// Boundary curves of a ruled disc as dense samples; columns are placed at
// equal fractions of the chord length of each polyline.
struct RuledDiscSpec {
  TargetSpace space;
  std::vector<TargetPoint> eta0;
  std::vector<TargetPoint> eta1;
  int n_a = 8;  // columns
  int n_t = 8;  // points per column
};

struct RuledDisc {
  MappedGraph graph;  // on DiscMesh::grid(n_a, n_t); vertex (i, j) is column i, row j
  int n_a = 0;
  int n_t = 0;
  std::vector<TargetPoint> column_start;  // eta0 at the column parameters
  std::vector<TargetPoint> column_end;    // eta1 at the column parameters

  int vertex(int column, int row) const { return row * n_a + column; }
};

// Point at fraction a of a polyline's length, by geodesics between samples.
// A polyline of zero length is parametrized by sample index instead.
TargetPoint polyline_point(const TargetSpace& space, std::span<const TargetPoint> samples, double a);

// Geodesic samples from p to q, `count` >= 2 of them.
std::vector<TargetPoint> geodesic_samples(const TargetSpace& space, const TargetPoint& p, const TargetPoint& q,
                                          int count);

// Vertex (i, j) goes to the point at fraction j / (n_t - 1) of the geodesic
// from eta0(a_i) to eta1(a_i). Throws Error(non_unique_geodesic) naming the
// column when the endpoints are not closer than R_kappa, and
// Error(invalid_argument) for non-finite curve lengths.
RuledDisc ruled_disc_map(const RuledDiscSpec& spec);

struct QuadrangleReport {
  double rho = 0.0;
  int column_pairs = 0;       // adjacent pairs within rho
  double empirical_l = 0.0;   // max ratio
  bool finite = true;
  bool at_most_one = true;    // expected for CAT(0) targets
};

// For adjacent columns a, b with both boundary gaps <= rho, the largest
// d(gamma_a(t), gamma_b(t)) / (d(eta0 a, eta0 b) + d(eta1 a, eta1 b)).
// rho defaults to rho_factor times the largest boundary sample spacing.
QuadrangleReport quadrangle_bound_check(const RuledDisc& disc, std::optional<double> rho = std::nullopt);

struct RuledMinimalityReport {
  double max_length_excess = 0.0;   // column polyline length - endpoint distance
  double max_spacing_spread = 0.0;  // max - min segment length within a column
  bool geodesic_columns = true;
  bool proportional = true;
  bool passed = true;
};

RuledMinimalityReport ruled_is_length_minimizing_check(const RuledDisc& disc,
                                                       double tolerance = defaults::ruled_exactness);

// Unit weights on grid edges whose endpoints differ in one uv coordinate,
// zero on the diagonals: the five-point stencil on the triangulated grid.
std::vector<double> grid_axis_weights(const DiscMesh& mesh);

// One image per boundary vertex of a unit-square mesh, in
// boundary_vertices() order: the vertex's uv position on the perimeter is
// mapped to the closed polygon through the images of the corners (0,0),
// (1,0), (1,1), (0,1), each side parametrized proportionally.
std::vector<TargetPoint> square_boundary_trace(const TargetSpace& space, const DiscMesh& mesh,
                                               std::span<const TargetPoint> corners);

struct HarmonicSpec {
  std::shared_ptr<const DiscMesh> mesh;
  TargetSpace space;
  std::vector<TargetPoint> trace;  // per boundary vertex, in boundary_vertices() order
  std::vector<double> weights;     // per edge, >= 0; empty: grid_axis_weights
  double tol = defaults::harmonic_tolerance;
  int max_sweeps = defaults::harmonic_max_sweeps;
};

struct HarmonicResult {
  MappedGraph graph;
  std::vector<double> weights;
  std::vector<double> energy_trace;  // entry 0 is the initial map
  std::vector<double> max_moves;     // per sweep
  int sweeps = 0;
  bool converged = false;
};

// Gauss-Seidel sweeps in ascending vertex order, each free vertex moved to
// the weighted barycenter of its neighbors. Interior vertices start at the
// barycenter of the trace. Throws Error(out_of_convexity) when the trace
// does not fit in a ball of radius < R_kappa / 2.
HarmonicResult harmonic_relax(const HarmonicSpec& spec);

// Sum of w_e d(f u, f v)^2 in edge order.
double discrete_energy(const MappedGraph& mg, std::span<const double> weights);

// Largest image distance over edges with both endpoints interior, and over
// all edges: the regularity and length-continuity trends.
struct EdgeModulus {
  double interior = 0.0;
  double all = 0.0;
};

EdgeModulus edge_modulus(const MappedGraph& mg);

}  // namespace catdisc
