#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rumor {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Immutable undirected simple graph over dense ids [0, n).
///
/// Adjacency is stored in CSR form with each neighbor list sorted
/// ascending, so neighbor iteration is a contiguous span.
class Graph {
 public:
  Graph() = default;

  /// Builds from an edge list. The node count is max(max id + 1, min_nodes).
  /// Throws SelfLoop / DuplicateEdge naming the offending edge.
  static Graph from_edges(std::span<const Edge> edges, std::size_t min_nodes = 0);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  /// Each undirected edge once, as (u, v) with u < v, in ascending order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

Graph build_graph(std::span<const Edge> edges);

bool is_connected(const Graph& g);
bool is_tree(const Graph& g);

/// A tree viewed from a chosen root: parents, children order and the size
/// of the subtree hanging below every node.
struct RootedView {
  NodeId root = 0;
  std::vector<NodeId> parent;            // kNoNode for the root
  std::vector<std::uint32_t> subtree_size;
  std::vector<NodeId> order;             // BFS order from the root

  std::size_t size() const noexcept { return parent.size(); }
};

/// Throws NotATree when g is not a tree, InvalidArgument on a bad root.
RootedView root_at(const Graph& g, NodeId root);

/// Same traversal without the acyclicity check; callers guarantee g is a tree.
RootedView root_tree_unchecked(const Graph& g, NodeId root);

/// Breadth-first spanning tree; each node's parent is its least-id
/// neighbor in the previous layer. Throws Disconnected.
Graph bfs_tree(const Graph& g, NodeId root);

/// Hop distances from src; unreachable nodes get kNoNode.
std::vector<NodeId> bfs_distances(const Graph& g, NodeId src);

/// Connected component labels (0-based, numbered by smallest member).
std::vector<NodeId> component_labels(const Graph& g, std::size_t* count = nullptr);

/// Subgraph induced by `nodes`; local id i corresponds to nodes[i].
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

// Edge-list text format: one "u v" pair per line, '#' starts a comment line.
// A "# nodes N" comment, when present, is reported through declared_nodes.
std::vector<Edge> read_edge_list(std::istream& in, std::size_t* declared_nodes = nullptr);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace rumor
