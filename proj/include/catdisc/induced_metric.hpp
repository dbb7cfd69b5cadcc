#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catdisc/mesh.hpp"
#include "catdisc/shortest_paths.hpp"

namespace catdisc {

// Metric space of zero-distance classes of a pseudometric on mesh vertices.
struct QuotientMetric {
  std::vector<int> vertex_class;    // projection vertex -> class
  std::vector<int> representative;  // class -> smallest member vertex
  std::vector<double> table;        // class_count() x class_count(), row major

  int class_count() const { return static_cast<int>(representative.size()); }
  double distance(int class_a, int class_b) const { return table[class_a * class_count() + class_b]; }
  double vertex_distance(int u, int v) const { return distance(vertex_class[u], vertex_class[v]); }
  std::vector<int> members(int cls) const;
};

// All-pairs shortest paths on the mesh graph, one Dijkstra per source.
std::vector<double> all_pairs_shortest_paths(const DiscMesh& mesh, std::span<const double> edge_weights);

CsrGraph mesh_graph(const DiscMesh& mesh, std::span<const double> edge_weights);

// Merges vertices at distance <= threshold (union over all pairs) and keeps
// the table on class representatives.
QuotientMetric quotient_from_table(int vertex_count, std::span<const double> table, double threshold);

// The induced length metric restricted to graph paths, with edge weight
// d_Y(f u, f v). Throws Error(not_length_connected) on a disconnected graph.
QuotientMetric induced_length_metric(const MappedGraph& mg);

enum class ConnectingMode { exact, anchor2approx };

const char* to_string(ConnectingMode mode);

struct ConnectingResult {
  double value = 0.0;
  ConnectingMode mode = ConnectingMode::exact;
  // The exact value lies in [value, approximation_factor * value].
  double approximation_factor = 1.0;
};

// Infimum of the image diameter over connected vertex sets containing x and
// z. `exact` enumerates subsets and needs at most 20 vertices.
// `anchor2approx` returns min over anchors v of the threshold at which x and z
// join one component of {u : d(f u, f v) <= threshold}; that is at most the
// exact value and at least half of it.
ConnectingResult connecting_metric(const MappedGraph& mg, int x, int z, ConnectingMode mode);

// Evaluates the anchor approximation for many pairs at once.
std::vector<double> connecting_anchor_batch(const MappedGraph& mg, std::span<const std::pair<int, int>> pairs);

struct MetricComparison {
  int pairs_checked = 0;
  int violations = 0;     // pairs with connecting > length + slack
  int strict_pairs = 0;   // connecting < length - slack
  double max_ratio = 0.0;  // max connecting / length over pairs with length > 0
  ConnectingMode mode = ConnectingMode::exact;
  double approximation_factor = 1.0;
  bool passed = true;
};

// Samples vertex pairs (all pairs when there are at most `pair_budget` of
// them) and checks |x - z|_f <= <x - z>_f.
MetricComparison compare_metrics(const MappedGraph& mg, const QuotientMetric& length, int pair_budget,
                                 std::uint64_t seed);

struct MonotoneQuotientReport {
  int classes = 0;
  int nontrivial_classes = 0;  // classes with more than one vertex
  int disconnected_classes = 0;
  bool passed = true;
};

// Each zero-distance class must induce a connected subgraph.
MonotoneQuotientReport monotone_quotient_check(const DiscMesh& mesh, const QuotientMetric& qm);

// Largest d_Y(f(rep a), f(rep b)) - class distance over class pairs; the
// induced map is 1-Lipschitz when this is <= 0 up to rounding.
double induced_map_lipschitz_excess(const MappedGraph& mg, const QuotientMetric& qm);

// Header "class,0,1,..." followed by one row per class, 12 significant digits.
std::string distance_table_csv(const QuotientMetric& qm);

}  // namespace catdisc
