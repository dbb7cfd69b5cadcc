#include "catdisc/shortest_paths.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "catdisc/error.hpp"

namespace catdisc {

CsrGraph::CsrGraph(int node_count, std::span<const Arc> undirected_arcs) {
  offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  for (const auto& [a, b, w] : undirected_arcs) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count) {
      throw Error(ErrorCode::invalid_argument, "arc endpoint out of range");
    }
    if (!(w >= 0.0)) throw Error(ErrorCode::invalid_argument, "arc weights must be nonnegative");
    ++offsets_[a + 1];
    ++offsets_[b + 1];
  }
  for (int v = 0; v < node_count; ++v) offsets_[v + 1] += offsets_[v];
  targets_.resize(offsets_.back());
  weights_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b, w] : undirected_arcs) {
    targets_[fill[a]] = b;
    weights_[fill[a]++] = w;
    targets_[fill[b]] = a;
    weights_[fill[b]++] = w;
  }
}

std::vector<int> ShortestPathTree::path_to(int target) const {
  if (dist[target] == unreachable) return {};
  std::vector<int> path;
  for (int v = target; v >= 0; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPathTree dijkstra(const CsrGraph& graph, std::span<const std::pair<int, double>> sources) {
  const int n = graph.node_count();
  ShortestPathTree tree{std::vector<double>(n, unreachable), std::vector<int>(n, -1)};
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (const auto& [s, d] : sources) {
    if (d < tree.dist[s]) {
      tree.dist[s] = d;
      heap.push({d, s});
    }
  }
  std::vector<char> done(n, 0);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    const auto tg = graph.targets(v);
    const auto wt = graph.weights(v);
    for (std::size_t k = 0; k < tg.size(); ++k) {
      const int w = tg[k];
      const double nd = d + wt[k];
      if (nd < tree.dist[w]) {
        tree.dist[w] = nd;
        tree.parent[w] = v;
        heap.push({nd, w});
      }
    }
  }
  return tree;
}

ShortestPathTree dijkstra(const CsrGraph& graph, int source) {
  const std::pair<int, double> s{source, 0.0};
  return dijkstra(graph, std::span(&s, 1));
}

}  // namespace catdisc
