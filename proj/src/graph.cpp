#include "rumor/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rumor/error.hpp"

namespace rumor {

namespace {

std::string edge_str(NodeId u, NodeId v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

}  // namespace

Graph Graph::from_edges(std::span<const Edge> edges, std::size_t min_nodes) {
  std::size_t n = min_nodes;
  for (auto [u, v] : edges) {
    if (u == v) fail(ErrorKind::SelfLoop, "self-loop " + edge_str(u, v));
    n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }

  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (auto [u, v] : edges) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

  g.targets_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : edges) {
    g.targets_[cursor[u]++] = v;
    g.targets_[cursor[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    if (auto dup = std::adjacent_find(first, last); dup != last) {
      fail(ErrorKind::DuplicateEdge, "duplicate edge " + edge_str(static_cast<NodeId>(v), *dup));
    }
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph build_graph(std::span<const Edge> edges) { return Graph::from_edges(edges); }

std::vector<NodeId> bfs_distances(const Graph& g, NodeId src) {
  std::vector<NodeId> dist(g.node_count(), kNoNode);
  std::vector<NodeId> queue;
  queue.reserve(g.node_count());
  dist[src] = 0;
  queue.push_back(src);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kNoNode) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<NodeId> component_labels(const Graph& g, std::size_t* count) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> label(n, kNoNode);
  std::vector<NodeId> stack;
  NodeId next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != kNoNode) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u)) {
        if (label[w] == kNoNode) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return false;
  std::size_t components = 0;
  component_labels(g, &components);
  return components == 1;
}

bool is_tree(const Graph& g) {
  return g.node_count() >= 1 && g.edge_count() == g.node_count() - 1 && is_connected(g);
}

RootedView root_tree_unchecked(const Graph& g, NodeId root) {
  const std::size_t n = g.node_count();
  RootedView view;
  view.root = root;
  view.parent.assign(n, kNoNode);
  view.subtree_size.assign(n, 1);
  view.order.reserve(n);
  view.order.push_back(root);
  for (std::size_t head = 0; head < view.order.size(); ++head) {
    NodeId u = view.order[head];
    for (NodeId w : g.neighbors(u)) {
      if (w != view.parent[u]) {
        view.parent[w] = u;
        view.order.push_back(w);
      }
    }
  }
  for (std::size_t i = view.order.size(); i-- > 1;) {
    NodeId w = view.order[i];
    view.subtree_size[view.parent[w]] += view.subtree_size[w];
  }
  return view;
}

RootedView root_at(const Graph& g, NodeId root) {
  if (root >= g.node_count()) {
    fail(ErrorKind::InvalidArgument, "root " + std::to_string(root) + " out of range");
  }
  if (!is_tree(g)) fail(ErrorKind::NotATree, "graph is not a tree");
  return root_tree_unchecked(g, root);
}

Graph bfs_tree(const Graph& g, NodeId root) {
  if (root >= g.node_count()) {
    fail(ErrorKind::InvalidArgument, "root " + std::to_string(root) + " out of range");
  }
  // Neighbor lists are sorted and the frontier is scanned in ascending id
  // order, so the first discoverer of a node is its least-id parent.
  const std::size_t n = g.node_count();
  std::vector<bool> seen(n, false);
  std::vector<NodeId> layer{root}, next;
  std::vector<Edge> edges;
  edges.reserve(n ? n - 1 : 0);
  seen[root] = true;
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end());
    next.clear();
    for (NodeId u : layer) {
      for (NodeId w : g.neighbors(u)) {
        if (!seen[w]) {
          seen[w] = true;
          edges.emplace_back(u, w);
          next.push_back(w);
        }
      }
    }
    layer.swap(next);
  }
  if (edges.size() + 1 != n) fail(ErrorKind::Disconnected, "graph is disconnected");
  return Graph::from_edges(edges, n);
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> local(g.node_count(), kNoNode);
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<NodeId>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : g.neighbors(nodes[i])) {
      NodeId j = local[w];
      if (j != kNoNode && i < j) edges.emplace_back(static_cast<NodeId>(i), j);
    }
  }
  return Graph::from_edges(edges, nodes.size());
}

std::vector<Edge> read_edge_list(std::istream& in, std::size_t* declared_nodes) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      // "# nodes N" keeps isolated trailing nodes (e.g. a single-node graph).
      std::istringstream header(line.substr(first + 1));
      std::string key;
      std::size_t count = 0;
      if (declared_nodes && header >> key >> count && key == "nodes") *declared_nodes = count;
      continue;
    }
    std::istringstream fields(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0 ||
        u > static_cast<long long>(kNoNode) - 1 || v > static_cast<long long>(kNoNode) - 1) {
      fail(ErrorKind::Parse, "malformed edge on line " + std::to_string(lineno) + ": '" + line + "'");
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  std::size_t declared = 0;
  auto edges = read_edge_list(in, &declared);
  return Graph::from_edges(edges, declared);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace rumor
