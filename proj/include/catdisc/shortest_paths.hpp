#pragma once

#include <limits>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace catdisc {

// Undirected weighted graph in compressed sparse row form.
class CsrGraph {
 public:
  using Arc = std::tuple<int, int, double>;

  CsrGraph() = default;
  CsrGraph(int node_count, std::span<const Arc> undirected_arcs);

  int node_count() const { return static_cast<int>(offsets_.size()) - 1; }
  std::size_t arc_count() const { return targets_.size(); }

  std::span<const int> targets(int v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> weights(int v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }

 private:
  std::vector<int> offsets_{0};
  std::vector<int> targets_;
  std::vector<double> weights_;
};

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<int> parent;  // -1 at sources and unreachable nodes

  // Node sequence from a source to `target` (empty if unreachable).
  std::vector<int> path_to(int target) const;
};

// Multi-source Dijkstra. Ties are broken by node id, so results depend only
// on the graph and the sources.
ShortestPathTree dijkstra(const CsrGraph& graph, std::span<const std::pair<int, double>> sources);

ShortestPathTree dijkstra(const CsrGraph& graph, int source);

inline constexpr double unreachable = std::numeric_limits<double>::infinity();

}  // namespace catdisc
