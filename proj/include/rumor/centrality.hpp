#pragma once

#include <cstdint>
#include <vector>

#include "rumor/graph.hpp"

namespace rumor {

/// Rumor centrality of every node of an observed graph.
///
/// `ranking` lists all nodes by descending centrality. Nodes with exactly
/// equal centrality form a tie group occupying ranking[group_begin[i],
/// group_end[i]) for every slot i of the group. Reports built without a
/// seed keep tie groups in ascending id order; estimate_source shuffles
/// every group with its seed.
struct CentralityReport {
  std::vector<double> log_centrality;  // natural log of R(u, G), by node id
  std::vector<NodeId> ranking;
  std::vector<std::uint32_t> group_begin;  // by ranking slot
  std::vector<std::uint32_t> group_end;
  std::vector<NodeId> centers;  // the argmax set, ascending id
  NodeId chosen = 0;            // ranking[0]

  std::size_t size() const noexcept { return log_centrality.size(); }
};

/// Log rumor centrality of every node of a tree in two traversals: root
/// once, then push values across each edge with
/// R(child) = R(parent) * T_child / (n - T_child). Throws NotATree.
CentralityReport rumor_centrality_tree(const Graph& g);

/// log R(u, G) for a single root by direct evaluation of n! / prod T^u_w.
double log_rumor_centrality_at(const Graph& tree, NodeId u);

struct CenterResult {
  std::vector<NodeId> centers;  // ascending id
  bool unique = true;
};

/// Balance rule: u is a center iff no subtree adjacent to u has more than
/// n/2 nodes. Throws NotATree.
CenterResult rumor_center(const Graph& g);

struct SourceEstimate {
  NodeId chosen = 0;
  CentralityReport report;
};

/// Maximum rumor centrality estimator. Trees are scored directly; any
/// other connected graph scores candidate u on its breadth-first tree.
/// Ties are broken uniformly with `seed`. Throws Disconnected.
SourceEstimate estimate_source(const Graph& g, std::uint64_t seed);

/// Scores every candidate on its own BFS tree even when g is a tree.
CentralityReport rumor_centrality_bfs(const Graph& g);

/// 1-based position of v in the report's ranking. Throws UnknownNode.
std::size_t rank_of_node(const CentralityReport& report, NodeId v);

/// Position of v when its tie group is put in a uniformly random order
/// drawn from `seed`.
std::size_t rank_of_node(const CentralityReport& report, NodeId v, std::uint64_t seed);

/// Shuffles every tie group of the report with `seed`; updates chosen.
void break_ties(CentralityReport& report, std::uint64_t seed);

}  // namespace rumor
