#include "rumor/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "rumor/error.hpp"
#include "rumor/rng.hpp"

namespace rumor {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Relative gap below which two log centralities are compared exactly.
constexpr double kNearTie = 1e-9;

bool near_tie(double a, double b) {
  return std::abs(a - b) <= kNearTie * std::max({1.0, std::abs(a), std::abs(b)});
}

// exact(u, v) < 0 when R(u) < R(v), 0 on equality, > 0 otherwise.
using ExactCompare = std::function<int(NodeId, NodeId)>;

void build_ranking(CentralityReport& rep, const ExactCompare& exact) {
  const std::size_t n = rep.log_centrality.size();
  const auto& lc = rep.log_centrality;
  rep.ranking.resize(n);
  for (std::size_t i = 0; i < n; ++i) rep.ranking[i] = static_cast<NodeId>(i);

  auto cmp3 = [&](NodeId a, NodeId b) {
    if (!near_tie(lc[a], lc[b])) return lc[a] < lc[b] ? -1 : 1;
    return exact(a, b);
  };
  std::sort(rep.ranking.begin(), rep.ranking.end(), [&](NodeId a, NodeId b) {
    int c = cmp3(a, b);
    return c != 0 ? c > 0 : a < b;
  });

  rep.group_begin.resize(n);
  rep.group_end.resize(n);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || cmp3(rep.ranking[i - 1], rep.ranking[i]) != 0) {
      for (std::size_t j = start; j < i; ++j) {
        rep.group_begin[j] = static_cast<std::uint32_t>(start);
        rep.group_end[j] = static_cast<std::uint32_t>(i);
      }
      start = i;
    }
  }
  rep.centers.clear();
  if (n > 0) {
    rep.centers.assign(rep.ranking.begin(), rep.ranking.begin() + rep.group_end[0]);
    std::sort(rep.centers.begin(), rep.centers.end());
    rep.chosen = rep.ranking[0];
  }
}

void require_tree(const Graph& g) {
  if (!is_tree(g)) fail(ErrorKind::NotATree, "graph is not a tree");
}

}  // namespace

double log_rumor_centrality_at(const Graph& tree, NodeId u) {
  const RootedView view = root_tree_unchecked(tree, u);
  double sum = 0;
  for (auto size : view.subtree_size) sum += std::log(static_cast<double>(size));
  return std::lgamma(static_cast<double>(tree.node_count()) + 1.0) - sum;
}

CentralityReport rumor_centrality_tree(const Graph& g) {
  require_tree(g);
  const std::size_t n = g.node_count();
  const RootedView view = root_tree_unchecked(g, 0);
  const auto& size = view.subtree_size;
  const double dn = static_cast<double>(n);

  CentralityReport rep;
  rep.log_centrality.assign(n, 0.0);
  double sum = 0;
  for (auto s : size) sum += std::log(static_cast<double>(s));
  rep.log_centrality[0] = std::lgamma(dn + 1.0) - sum;
  for (std::size_t i = 1; i < n; ++i) {
    NodeId c = view.order[i];
    const double sc = size[c];
    rep.log_centrality[c] = rep.log_centrality[view.parent[c]] + std::log(sc) - std::log(dn - sc);
  }

  // Exact ratio along the tree path: R(u)/R(v) is the product over path
  // edges (p, c) of S_c / (n - S_c) when walking parent -> child.
  std::vector<std::uint32_t> depth(n, 0);
  for (std::size_t i = 1; i < n; ++i) depth[view.order[i]] = depth[view.parent[view.order[i]]] + 1;
  auto exact = [&](NodeId u, NodeId v) -> int {
    // Walking from u to v: an edge traversed child -> parent multiplies the
    // ratio R(u)/R(v) by S_c / (n - S_c); parent -> child by the inverse.
    BigInt num = 1, den = 1;
    NodeId a = u, b = v;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        num *= size[a];
        den *= n - size[a];
        a = view.parent[a];
      } else {
        num *= n - size[b];
        den *= size[b];
        b = view.parent[b];
      }
    }
    return num < den ? -1 : (num > den ? 1 : 0);
  };
  build_ranking(rep, exact);
  return rep;
}

CenterResult rumor_center(const Graph& g) {
  require_tree(g);
  const std::size_t n = g.node_count();
  const RootedView view = root_tree_unchecked(g, 0);
  CenterResult out;
  for (NodeId u = 0; u < n; ++u) {
    std::size_t biggest = n - view.subtree_size[u];  // side containing the parent
    for (NodeId w : g.neighbors(u)) {
      if (w != view.parent[u]) biggest = std::max<std::size_t>(biggest, view.subtree_size[w]);
    }
    if (2 * biggest <= n) out.centers.push_back(u);
  }
  out.unique = out.centers.size() == 1;
  return out;
}

CentralityReport rumor_centrality_bfs(const Graph& g) {
  if (!is_connected(g)) fail(ErrorKind::Disconnected, "graph is disconnected");
  const std::size_t n = g.node_count();
  CentralityReport rep;
  rep.log_centrality.resize(n);
  std::vector<std::vector<std::uint32_t>> sizes(n);
  for (NodeId u = 0; u < n; ++u) {
    const Graph tree = bfs_tree(g, u);
    RootedView view = root_tree_unchecked(tree, u);
    double sum = 0;
    for (auto s : view.subtree_size) sum += std::log(static_cast<double>(s));
    rep.log_centrality[u] = std::lgamma(static_cast<double>(n) + 1.0) - sum;
    sizes[u] = std::move(view.subtree_size);
  }
  std::vector<std::optional<BigInt>> product(n);
  auto prod = [&](NodeId u) -> const BigInt& {
    if (!product[u]) {
      BigInt p = 1;
      for (auto s : sizes[u]) p *= s;
      product[u] = std::move(p);
    }
    return *product[u];
  };
  // Larger product of subtree sizes means smaller centrality.
  auto exact = [&](NodeId u, NodeId v) -> int {
    const BigInt& pu = prod(u);
    const BigInt& pv = prod(v);
    return pu > pv ? -1 : (pu < pv ? 1 : 0);
  };
  build_ranking(rep, exact);
  return rep;
}

void break_ties(CentralityReport& rep, std::uint64_t seed) {
  Engine eng(seed);
  const std::size_t n = rep.ranking.size();
  for (std::size_t i = 0; i < n; i = rep.group_end[i]) {
    const std::size_t end = rep.group_end[i];
    for (std::size_t k = end - i; k > 1; --k) {
      std::swap(rep.ranking[i + k - 1], rep.ranking[i + uniform_index(eng, k)]);
    }
  }
  if (n > 0) rep.chosen = rep.ranking[0];
}

SourceEstimate estimate_source(const Graph& g, std::uint64_t seed) {
  if (!is_connected(g)) fail(ErrorKind::Disconnected, "graph is disconnected");
  SourceEstimate est;
  est.report = is_tree(g) ? rumor_centrality_tree(g) : rumor_centrality_bfs(g);
  break_ties(est.report, seed);
  est.chosen = est.report.chosen;
  return est;
}

std::size_t rank_of_node(const CentralityReport& report, NodeId v) {
  if (v >= report.ranking.size()) fail(ErrorKind::UnknownNode, "node " + std::to_string(v) + " not in report");
  auto it = std::find(report.ranking.begin(), report.ranking.end(), v);
  return static_cast<std::size_t>(it - report.ranking.begin()) + 1;
}

std::size_t rank_of_node(const CentralityReport& report, NodeId v, std::uint64_t seed) {
  const std::size_t slot = rank_of_node(report, v) - 1;
  const std::size_t begin = report.group_begin[slot];
  const std::size_t width = report.group_end[slot] - begin;
  Engine eng(seed);
  return begin + 1 + (width > 1 ? uniform_index(eng, width) : 0);
}

}  // namespace rumor
