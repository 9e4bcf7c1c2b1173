#pragma once

// Independent reference computations shared by the tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rumor/graph.hpp"
#include "rumor/rng.hpp"

namespace rumor::testing {

/// Uniform random labelled tree on n nodes from a Pruefer sequence.
inline Graph random_tree(std::size_t n, Engine& eng) {
  if (n == 1) return Graph::from_edges({}, 1);
  if (n == 2) {
    const std::vector<Edge> e{{0, 1}};
    return build_graph(e);
  }
  std::vector<NodeId> seq(n - 2);
  for (auto& s : seq) s = static_cast<NodeId>(uniform_index(eng, n));
  std::vector<std::size_t> degree(n, 1);
  for (NodeId s : seq) ++degree[s];
  std::vector<Edge> edges;
  for (NodeId s : seq) {
    NodeId leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.emplace_back(leaf, s);
    --degree[leaf];
    --degree[s];
  }
  std::vector<NodeId> last;
  for (NodeId v = 0; v < n; ++v)
    if (degree[v] == 1) last.push_back(v);
  edges.emplace_back(last[0], last[1]);
  return build_graph(edges);
}

/// Number of node orders starting at u in which each node follows some
/// already listed neighbour, by brute-force enumeration over permutations.
inline std::uint64_t count_spreading_orders(const Graph& t, NodeId u) {
  const std::size_t n = t.node_count();
  std::vector<NodeId> rest;
  for (NodeId v = 0; v < n; ++v)
    if (v != u) rest.push_back(v);
  std::uint64_t count = 0;
  do {
    std::vector<bool> seen(n, false);
    seen[u] = true;
    bool ok = true;
    for (NodeId v : rest) {
      bool linked = false;
      for (NodeId w : t.neighbors(v)) linked = linked || seen[w];
      if (!linked) {
        ok = false;
        break;
      }
      seen[v] = true;
    }
    count += ok;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return count;
}

}  // namespace rumor::testing
