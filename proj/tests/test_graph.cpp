#include <doctest.h>

#include <sstream>

#include "oracle_util.hpp"
#include "rumor/error.hpp"
#include "rumor/graph.hpp"

using namespace rumor;

namespace {

Graph make(std::vector<Edge> e) { return build_graph(e); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("build_graph normalizes edges") {
  const Graph path = make({{0, 1}, {1, 2}});
  CHECK(path.node_count() == 3);
  CHECK(path.edge_count() == 2);
  CHECK(path.degree(1) == 2);
  CHECK(path.has_edge(2, 1));

  const Graph fig = make({{0, 1}, {0, 2}, {1, 3}, {1, 4}});
  CHECK(fig.node_count() == 5);
  CHECK(fig.edge_count() == 4);
  CHECK(is_tree(fig));

  const Graph g = make({{3, 0}, {2, 0}, {0, 1}});
  const auto nb = g.neighbors(0);
  CHECK(std::vector<NodeId>(nb.begin(), nb.end()) == std::vector<NodeId>{1, 2, 3});
}

TEST_CASE("build_graph rejects self loops and duplicates") {
  CHECK(kind_of([] { make({{0, 0}}); }) == ErrorKind::SelfLoop);
  CHECK(kind_of([] { make({{0, 1}, {1, 0}}); }) == ErrorKind::DuplicateEdge);
  CHECK(kind_of([] { make({{2, 3}, {2, 3}}); }) == ErrorKind::DuplicateEdge);
}

TEST_CASE("is_tree") {
  CHECK(is_tree(make({{0, 1}, {1, 2}})));
  CHECK_FALSE(is_tree(make({{0, 1}, {1, 2}, {2, 0}})));
  CHECK_FALSE(is_tree(make({{0, 1}, {2, 3}})));
  CHECK(is_tree(Graph::from_edges({}, 1)));
}

TEST_CASE("root_at subtree sizes") {
  const Graph fig = make({{0, 1}, {0, 2}, {1, 3}, {1, 4}});
  const auto v = root_at(fig, 0);
  CHECK(v.subtree_size == std::vector<std::uint32_t>{5, 3, 1, 1, 1});
  CHECK(v.parent[0] == kNoNode);
  CHECK(v.parent[3] == 1);

  const auto mid = root_at(make({{0, 1}, {1, 2}}), 1);
  CHECK(mid.subtree_size == std::vector<std::uint32_t>{1, 3, 1});

  const auto single = root_at(Graph::from_edges({}, 1), 0);
  CHECK(single.subtree_size == std::vector<std::uint32_t>{1});

  CHECK(kind_of([] { root_at(make({{0, 1}, {1, 2}, {2, 0}}), 0); }) == ErrorKind::NotATree);
  CHECK(kind_of([] { root_at(make({{0, 1}}), 5); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("rooted view properties on random trees") {
  Engine eng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + uniform_index(eng, 40);
    const Graph t = testing::random_tree(n, eng);
    for (NodeId u = 0; u < n; ++u) {
      const auto ru = root_at(t, u);
      REQUIRE(ru.subtree_size[u] == n);
      std::size_t child_sum = 0;
      for (NodeId w : t.neighbors(u)) child_sum += ru.subtree_size[w];
      CHECK(child_sum == n - 1);
      for (NodeId w = 0; w < n; ++w) {
        std::size_t s = 1;
        for (NodeId x : t.neighbors(w))
          if (ru.parent[x] == w) s += ru.subtree_size[x];
        CHECK(ru.subtree_size[w] == s);
      }
      // Re-rooting across an edge: T_u^v = n - T_v^u.
      for (NodeId v : t.neighbors(u)) {
        const auto rv = root_at(t, v);
        CHECK(rv.subtree_size[u] == n - ru.subtree_size[v]);
      }
    }
  }
}

TEST_CASE("bfs_tree uses least-id parents") {
  const Graph square = make({{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(bfs_tree(square, 0).edges() == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});
  const Graph tri = make({{0, 1}, {1, 2}, {2, 0}});
  CHECK(bfs_tree(tri, 0).edges() == std::vector<Edge>{{0, 1}, {0, 2}});
  const Graph fig = make({{0, 1}, {0, 2}, {1, 3}, {1, 4}});
  CHECK(bfs_tree(fig, 3) == fig);
  CHECK(kind_of([] { bfs_tree(make({{0, 1}, {2, 3}}), 0); }) == ErrorKind::Disconnected);
}

TEST_CASE("bfs_tree spans random connected graphs") {
  Engine eng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + uniform_index(eng, 30);
    std::vector<Edge> e = testing::random_tree(n, eng).edges();
    for (int extra = 0; extra < 10; ++extra) {
      NodeId a = uniform_index(eng, n), b = uniform_index(eng, n);
      if (a == b) continue;
      Edge ed{std::min(a, b), std::max(a, b)};
      if (std::find(e.begin(), e.end(), ed) == e.end()) e.push_back(ed);
    }
    const Graph g = build_graph(e);
    const NodeId root = uniform_index(eng, n);
    const Graph t = bfs_tree(g, root);
    CHECK(is_tree(t));
    CHECK(t.node_count() == n);
    for (const auto& [a, b] : t.edges()) CHECK(g.has_edge(a, b));
    CHECK(bfs_distances(t, root) == bfs_distances(g, root));
  }
}

TEST_CASE("components and induced subgraphs") {
  const Graph g = make({{0, 1}, {2, 3}, {3, 4}});
  std::size_t count = 0;
  const auto label = component_labels(g, &count);
  CHECK(count == 2);
  CHECK(label[0] == label[1]);
  CHECK(label[2] == label[4]);
  CHECK(label[0] != label[2]);
  const std::vector<NodeId> keep{2, 4, 3};
  const Graph sub = induced_subgraph(g, keep);
  CHECK(sub.node_count() == 3);
  CHECK(sub.edge_count() == 2);
}

TEST_CASE("edge list round trip") {
  const Graph fig = make({{0, 1}, {0, 2}, {1, 3}, {1, 4}});
  std::stringstream buf;
  write_edge_list(buf, fig);
  std::size_t declared = 0;
  const auto edges = read_edge_list(buf, &declared);
  CHECK(Graph::from_edges(edges, declared) == fig);

  std::stringstream single;
  write_edge_list(single, Graph::from_edges({}, 1));
  const auto none = read_edge_list(single, &declared);
  CHECK(none.empty());
  CHECK(declared == 1);

  std::stringstream text("# comment\n0 1\n\n1   2\n");
  CHECK(read_edge_list(text).size() == 2);

  std::stringstream bad("0 x\n");
  CHECK(kind_of([&] { read_edge_list(bad); }) == ErrorKind::Parse);
}
