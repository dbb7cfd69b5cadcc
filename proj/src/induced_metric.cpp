#include "catdisc/induced_metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "catdisc/defaults.hpp"
#include "catdisc/error.hpp"
#include "catdisc/parallel.hpp"
#include "catdisc/rng.hpp"

namespace catdisc {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

std::vector<double> image_distance_table(const MappedGraph& mg) {
  const int n = mg.vertex_count();
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      d[a * n + b] = d[b * n + a] = mg.space.distance(mg.images[a], mg.images[b]);
    }
  }
  return d;
}

double connecting_exact(const MappedGraph& mg, const std::vector<double>& image_dist, int x, int z) {
  const DiscMesh& mesh = *mg.mesh;
  const int n = mesh.vertex_count();
  std::vector<std::uint32_t> adj(n, 0);
  for (const auto& [a, b] : mesh.edges()) {
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1u);
  const std::uint32_t need = (1u << x) | (1u << z);
  double best = std::numeric_limits<double>::infinity();

  // diameter[mask] built from mask minus its lowest vertex.
  std::vector<double> diameter(static_cast<std::size_t>(1) << n, 0.0);
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    double d = diameter[rest];
    for (std::uint32_t r = rest; r; r &= r - 1) d = std::max(d, image_dist[low * n + std::countr_zero(r)]);
    diameter[mask] = d;
    if ((mask & need) != need || d >= best) continue;
    std::uint32_t reached = 1u << x;
    std::uint32_t frontier = reached;
    while (frontier) {
      std::uint32_t next = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
      next &= mask & ~reached;
      reached |= next;
      frontier = next;
    }
    if (reached & (1u << z)) best = d;
  }
  return best;
}

}  // namespace

std::vector<int> QuotientMetric::members(int cls) const {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(vertex_class.size()); ++v) {
    if (vertex_class[v] == cls) out.push_back(v);
  }
  return out;
}

CsrGraph mesh_graph(const DiscMesh& mesh, std::span<const double> edge_weights) {
  if (static_cast<int>(edge_weights.size()) != mesh.edge_count()) {
    throw Error(ErrorCode::invalid_argument, "one weight per edge required");
  }
  std::vector<CsrGraph::Arc> arcs;
  arcs.reserve(mesh.edges().size());
  for (int e = 0; e < mesh.edge_count(); ++e) {
    arcs.emplace_back(mesh.edges()[e].first, mesh.edges()[e].second, edge_weights[e]);
  }
  return CsrGraph(mesh.vertex_count(), arcs);
}

std::vector<double> all_pairs_shortest_paths(const DiscMesh& mesh, std::span<const double> edge_weights) {
  const CsrGraph graph = mesh_graph(mesh, edge_weights);
  const int n = mesh.vertex_count();
  std::vector<double> table(static_cast<std::size_t>(n) * n);
  parallel_for(n, [&](std::size_t s) {
    const auto tree = dijkstra(graph, static_cast<int>(s));
    std::copy(tree.dist.begin(), tree.dist.end(), table.begin() + s * n);
  });
  // Symmetrize against rounding in the summation order.
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double m = std::min(table[a * n + b], table[b * n + a]);
      table[a * n + b] = table[b * n + a] = m;
    }
  }
  return table;
}

QuotientMetric quotient_from_table(int n, std::span<const double> table, double threshold) {
  UnionFind uf(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (table[a * n + b] <= threshold) uf.unite(a, b);
    }
  }
  QuotientMetric qm;
  qm.vertex_class.assign(n, -1);
  std::vector<int> root_class(n, -1);
  for (int v = 0; v < n; ++v) {
    const int r = uf.find(v);
    if (root_class[r] < 0) {
      root_class[r] = qm.class_count();
      qm.representative.push_back(v);
    }
    qm.vertex_class[v] = root_class[r];
  }
  const int k = qm.class_count();
  qm.table.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const double d = table[qm.representative[a] * n + qm.representative[b]];
      qm.table[a * k + b] = qm.table[b * k + a] = d;
    }
  }
  return qm;
}

QuotientMetric induced_length_metric(const MappedGraph& mg) {
  mg.validate();
  if (!mg.mesh->connected()) throw Error(ErrorCode::not_length_connected, "graph is disconnected");
  const auto weights = mg.edge_lengths();
  const auto table = all_pairs_shortest_paths(*mg.mesh, weights);
  return quotient_from_table(mg.vertex_count(), table, defaults::zero_class);
}

const char* to_string(ConnectingMode mode) {
  return mode == ConnectingMode::exact ? "exact" : "anchor2approx";
}

std::vector<double> connecting_anchor_batch(const MappedGraph& mg, std::span<const std::pair<int, int>> pairs) {
  const DiscMesh& mesh = *mg.mesh;
  const int n = mesh.vertex_count();
  const int m = mesh.edge_count();
  std::vector<double> per_anchor(static_cast<std::size_t>(n) * pairs.size());

  parallel_for(n, [&](std::size_t anchor) {
    std::vector<double> activation(n);
    for (int u = 0; u < n; ++u) activation[u] = mg.space.distance(mg.images[u], mg.images[anchor]);
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    auto edge_time = [&](int e) {
      return std::max(activation[mesh.edges()[e].first], activation[mesh.edges()[e].second]);
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ta = edge_time(a);
      const double tb = edge_time(b);
      return ta != tb ? ta < tb : a < b;
    });
    // Union by rank without path compression: the forest stays shallow and the
    // largest link time between two vertices is the time they merged.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> rank(n, 0);
    std::vector<double> link_time(n, 0.0);
    auto root = [&](int v) {
      while (parent[v] != v) v = parent[v];
      return v;
    };
    for (int e : order) {
      int a = root(mesh.edges()[e].first);
      int b = root(mesh.edges()[e].second);
      if (a == b) continue;
      if (rank[a] < rank[b]) std::swap(a, b);
      parent[b] = a;
      link_time[b] = edge_time(e);
      if (rank[a] == rank[b]) ++rank[a];
    }
    std::vector<std::pair<int, double>> chain;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [x, z] = pairs[k];
      double& out = per_anchor[anchor * pairs.size() + k];
      if (x == z) {
        out = 0.0;
        continue;
      }
      chain.clear();
      double up = 0.0;
      for (int v = x;; v = parent[v]) {
        chain.push_back({v, up});
        if (parent[v] == v) break;
        up = std::max(up, link_time[v]);
      }
      out = std::numeric_limits<double>::infinity();
      double down = 0.0;
      for (int v = z;; v = parent[v]) {
        const auto it = std::find_if(chain.begin(), chain.end(), [v](const auto& c) { return c.first == v; });
        if (it != chain.end()) {
          out = std::max(it->second, down);
          break;
        }
        if (parent[v] == v) break;
        down = std::max(down, link_time[v]);
      }
    }
  });

  std::vector<double> result(pairs.size(), std::numeric_limits<double>::infinity());
  for (int a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < pairs.size(); ++k) result[k] = std::min(result[k], per_anchor[a * pairs.size() + k]);
  }
  return result;
}

ConnectingResult connecting_metric(const MappedGraph& mg, int x, int z, ConnectingMode mode) {
  mg.validate();
  const int n = mg.vertex_count();
  if (x < 0 || z < 0 || x >= n || z >= n) throw Error(ErrorCode::invalid_argument, "vertex out of range");
  if (mode == ConnectingMode::exact) {
    if (n > defaults::connecting_exact_max_vertices) {
      throw Error(ErrorCode::invalid_argument, "exact connecting metric needs at most " +
                                                   std::to_string(defaults::connecting_exact_max_vertices) +
                                                   " vertices");
    }
    if (x == z) return {0.0, mode, 1.0};
    return {connecting_exact(mg, image_distance_table(mg), x, z), mode, 1.0};
  }
  const std::pair<int, int> pair{x, z};
  return {connecting_anchor_batch(mg, std::span(&pair, 1)).front(), mode, 2.0};
}

MetricComparison compare_metrics(const MappedGraph& mg, const QuotientMetric& length, int pair_budget,
                                 std::uint64_t seed) {
  const int n = mg.vertex_count();
  std::vector<std::pair<int, int>> pairs;
  const long long all = static_cast<long long>(n) * (n - 1) / 2;
  if (all <= pair_budget) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) pairs.push_back({a, b});
    }
  } else {
    Rng rng(seed);
    std::set<std::pair<int, int>> chosen;
    while (static_cast<int>(chosen.size()) < pair_budget) {
      int a = static_cast<int>(rng.index(n));
      int b = static_cast<int>(rng.index(n));
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (chosen.insert({a, b}).second) pairs.push_back({a, b});
    }
  }

  MetricComparison out;
  std::vector<double> connecting;
  if (n <= defaults::connecting_exact_max_vertices) {
    out.mode = ConnectingMode::exact;
    const auto image_dist = image_distance_table(mg);
    for (const auto& [a, b] : pairs) connecting.push_back(connecting_exact(mg, image_dist, a, b));
  } else {
    out.mode = ConnectingMode::anchor2approx;
    out.approximation_factor = 2.0;
    connecting = connecting_anchor_batch(mg, pairs);
  }

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double len = length.vertex_distance(pairs[k].first, pairs[k].second);
    const double con = connecting[k];
    const double slack = 1e-9 * std::max(1.0, len);
    ++out.pairs_checked;
    if (con > len + slack) ++out.violations;
    if (con < len - slack) ++out.strict_pairs;
    if (len > 0.0) out.max_ratio = std::max(out.max_ratio, con / len);
  }
  out.passed = out.violations == 0;
  return out;
}

MonotoneQuotientReport monotone_quotient_check(const DiscMesh& mesh, const QuotientMetric& qm) {
  MonotoneQuotientReport rep;
  rep.classes = qm.class_count();
  std::vector<int> size(qm.class_count(), 0);
  for (int c : qm.vertex_class) ++size[c];
  UnionFind uf(mesh.vertex_count());
  for (const auto& [a, b] : mesh.edges()) {
    if (qm.vertex_class[a] == qm.vertex_class[b]) uf.unite(a, b);
  }
  std::vector<int> class_root(qm.class_count(), -1);
  std::vector<char> broken(qm.class_count(), 0);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const int c = qm.vertex_class[v];
    const int r = uf.find(v);
    if (class_root[c] < 0) {
      class_root[c] = r;
    } else if (class_root[c] != r) {
      broken[c] = 1;
    }
  }
  for (int c = 0; c < qm.class_count(); ++c) {
    if (size[c] > 1) ++rep.nontrivial_classes;
    if (broken[c]) ++rep.disconnected_classes;
  }
  rep.passed = rep.disconnected_classes == 0;
  return rep;
}

double induced_map_lipschitz_excess(const MappedGraph& mg, const QuotientMetric& qm) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < qm.class_count(); ++a) {
    for (int b = a + 1; b < qm.class_count(); ++b) {
      const double dy = mg.space.distance(mg.images[qm.representative[a]], mg.images[qm.representative[b]]);
      worst = std::max(worst, dy - qm.distance(a, b));
    }
  }
  return qm.class_count() < 2 ? 0.0 : worst;
}

std::string distance_table_csv(const QuotientMetric& qm) {
  std::ostringstream os;
  os << "class";
  for (int c = 0; c < qm.class_count(); ++c) os << ',' << c;
  os << '\n';
  char buf[32];
  for (int a = 0; a < qm.class_count(); ++a) {
    os << a;
    for (int b = 0; b < qm.class_count(); ++b) {
      std::snprintf(buf, sizeof buf, "%.12g", qm.distance(a, b));
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace catdisc
