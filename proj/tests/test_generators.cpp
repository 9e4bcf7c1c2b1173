#include <doctest.h>

#include <cmath>
#include <map>

#include "rumor/error.hpp"
#include "rumor/generators.hpp"
#include "rumor/stats.hpp"

using namespace rumor;

namespace {

// Sphere sizes around v inside v's root subtree, by plain BFS on g - root.
std::vector<std::size_t> arm_spheres(const Graph& g, NodeId root, NodeId v, std::uint32_t radius) {
  std::vector<std::uint32_t> dist(g.node_count(), kNoNode);
  std::vector<std::size_t> sphere(radius + 1, 0);
  std::vector<NodeId> queue{v};
  dist[v] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const NodeId u = queue[i];
    ++sphere[dist[u]];
    if (dist[u] == radius) continue;
    for (NodeId w : g.neighbors(u)) {
      if (w == root || dist[w] != kNoNode) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return sphere;
}

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

TEST_CASE("offspring laws") {
  CHECK(OffspringSpec::parse("det:3").mean() == 3);
  CHECK(OffspringSpec::parse("poisson:2.5").mean() == doctest::Approx(2.5));
  const auto cat = OffspringSpec::parse("cat:0.25,0,0.75");
  CHECK(cat.mean() == doctest::Approx(1.5));
  CHECK(cat.pmf(2) == doctest::Approx(0.75));
  CHECK(cat.pmf(5) == 0);
  CHECK(cat.pgf(0.5) == doctest::Approx(0.25 + 0.75 * 0.25));
  const auto poi = OffspringSpec::poisson(3);
  CHECK(poi.pgf(0.3) == doctest::Approx(std::exp(3 * (0.3 - 1))));
  CHECK(poi.pmf(2) == doctest::Approx(std::exp(-3.0) * 4.5));
  for (const auto& s : {OffspringSpec::deterministic(4), OffspringSpec::poisson(1.25), cat}) {
    const auto back = OffspringSpec::parse(s.to_string());
    CHECK(back.mean() == doctest::Approx(s.mean()));
    CHECK(back.pgf(0.4) == doctest::Approx(s.pgf(0.4)));
  }
  for (const char* bad : {"cat:0.5,0.4", "poisson:0", "cat:-0.1,1.1", "binomial:3", "det", "det:x"}) {
    CHECK_THROWS_AS(OffspringSpec::parse(bad), Error);
  }
}

TEST_CASE("regular trees") {
  LazyTree line = regular_tree(2);
  CHECK(line.materialize_radius(5) == 11);
  const Graph g2 = line.to_graph();
  CHECK(is_tree(g2));
  for (NodeId v = 0; v < g2.node_count(); ++v) CHECK(g2.degree(v) <= 2);

  LazyTree t3 = regular_tree(3);
  CHECK(t3.materialize_radius(2) == 10);

  LazyTree t4 = regular_tree(4);
  t4.materialize_radius(3);
  const Graph g4 = t4.to_graph();
  const auto depth = bfs_distances(g4, 0);
  for (NodeId v = 0; v < g4.node_count(); ++v) {
    if (depth[v] < 3) CHECK(g4.degree(v) == 4);
  }
  CHECK(kind_of([] { regular_tree(1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("galton watson trees") {
  LazyTree a = galton_watson(OffspringSpec::deterministic(3), OffspringSpec::deterministic(2), 1);
  LazyTree b = regular_tree(3);
  a.materialize_radius(4);
  b.materialize_radius(4);
  CHECK(a.to_graph() == b.to_graph());

  LazyTree alone = galton_watson(OffspringSpec::poisson(3), OffspringSpec::categorical({1.0}), 5);
  const std::size_t kids = alone.child_count(0);
  CHECK(alone.materialize_radius(10) == 1 + kids);
  for (NodeId v = 1; v <= kids; ++v) CHECK(alone.child_count(v) == 0);

  LazyTree root_only = galton_watson(OffspringSpec::categorical({1.0}), OffspringSpec::categorical({1.0}), 5);
  CHECK(root_only.materialize_radius(3) == 1);

  double total = 0;
  std::size_t nodes = 0;
  for (std::uint64_t s = 0; nodes < 100000; ++s) {
    LazyTree t = galton_watson(OffspringSpec::poisson(3), OffspringSpec::poisson(3), s);
    t.materialize_radius(4);
    const std::size_t known = t.known_nodes();
    for (NodeId v = 0; v < known && nodes < 100000; ++v) {
      total += t.child_count(v);
      ++nodes;
    }
  }
  CHECK(std::abs(total / nodes - 3) < 0.05);

  LazyTree x = galton_watson(OffspringSpec::poisson(2), OffspringSpec::poisson(2), 42);
  LazyTree y = galton_watson(OffspringSpec::poisson(2), OffspringSpec::poisson(2), 42);
  x.materialize_radius(6);
  y.materialize_radius(6);
  CHECK(x.to_graph() == y.to_graph());
}

TEST_CASE("erdos renyi graphs") {
  const Graph pair = erdos_renyi(2, 2, 0);
  CHECK(pair.edge_count() == 1);
  CHECK(erdos_renyi(50, 0, 3).edge_count() == 0);
  const Graph big = erdos_renyi(10000, 10, 1);
  CHECK(std::abs(2.0 * big.edge_count() / 10000 - 10) < 0.2);
  CHECK(erdos_renyi(300, 4, 9) == erdos_renyi(300, 4, 9));
  CHECK_FALSE(erdos_renyi(300, 4, 9) == erdos_renyi(300, 4, 10));
  CHECK_THROWS_AS(erdos_renyi(10, 11, 0), Error);

  // Pair inclusion frequency matches p: chi-square over the 45 pairs of K10.
  std::vector<double> hits(45, 0);
  const int reps = 4000;
  for (int s = 0; s < reps; ++s) {
    const Graph g = erdos_renyi(10, 3, s);
    for (const auto& [u, v] : g.edges()) ++hits[u * 10 + v - (u + 1) * (u + 2) / 2];
  }
  double stat = 0;
  for (double h : hits) stat += (h - reps * 0.3) * (h - reps * 0.3) / (reps * 0.3 * 0.7);
  CHECK(stat < 80);  // chi-square(45) 99.9% quantile is about 80
}

TEST_CASE("random regular graphs") {
  const Graph k4 = random_regular(4, 3, 0);
  CHECK(k4.edge_count() == 6);
  const Graph g = random_regular(1000, 3, 7);
  for (NodeId v = 0; v < 1000; ++v) CHECK(g.degree(v) == 3);
  CHECK(kind_of([] { random_regular(3, 3, 0); }) == ErrorKind::Infeasible);
  CHECK(kind_of([] { random_regular(5, 3, 0); }) == ErrorKind::Infeasible);
  CHECK(random_regular(100, 4, 3) == random_regular(100, 4, 3));
}

TEST_CASE("galton watson matches erdos renyi neighbourhoods") {
  const std::size_t m = 10000;
  const double c = 5;
  std::vector<double> er(30, 0), gw(30, 0);
  Engine eng(4);
  std::size_t er_samples = 0;
  for (std::uint64_t s = 0; er_samples < 20000; ++s) {
    const Graph g = erdos_renyi(m, c, s);
    for (int i = 0; i < 5000; ++i) {
      const NodeId v = uniform_index(eng, m);
      if (g.degree(v) == 0) continue;
      const NodeId u = g.neighbors(v)[uniform_index(eng, g.degree(v))];
      ++er[std::min<std::size_t>(g.degree(u), 29)];
      ++er_samples;
    }
  }
  std::size_t gw_samples = 0;
  for (std::uint64_t s = 0; gw_samples < 20000; ++s) {
    LazyTree t = galton_watson(OffspringSpec::poisson(c), OffspringSpec::poisson(c), s);
    if (t.child_count(0) == 0) continue;  // as in ER, the root needs a neighbour
    ++gw[std::min<std::size_t>(1 + t.child_count(1), 29)];
    ++gw_samples;
  }
  CHECK(stats::total_variation(er, gw) < 0.05);
}

TEST_CASE("geometric checker") {
  std::vector<Edge> line;
  for (NodeId v = 0; v < 40; ++v) line.emplace_back(v, v + 1);
  const Graph path = build_graph(line);
  // Rooted at the middle the path is two line arms.
  const auto ok = check_geometric(path, 20, 0, 1, 2);
  CHECK(ok.ok);
  CHECK(ok.usable_radius == 19);
  const auto bad = check_geometric(path, 0, 0, 1, 1, 2);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness);
  CHECK(bad.witness->count == 2);

  LazyTree t3 = regular_tree(3);
  t3.materialize_radius(8);
  const auto exp_growth = check_geometric(t3.to_graph(), 0, 1, 1, 4);
  CHECK_FALSE(exp_growth.ok);
  REQUIRE(exp_growth.witness);
  CHECK(exp_growth.witness->count > 4.0 * exp_growth.witness->radius);
  CHECK(exp_growth.witness->radius == 5);
}

TEST_CASE("geometric trees pass an independent sphere count") {
  const std::vector<GeometricTreeSpec> specs{
      {0, 1, 2, 3, 15, 1}, {1, 1, 4, 3, 20, 1}, {1, 1, 1.5, 4, 40, 1}, {0.5, 1, 3, 5, 30, 1}, {0.5, 1, 3, 5, 30, 2}, {2, 1, 3, 5, 12, 1},
  };
  for (const auto& spec : specs) {
    const auto tree = geometric_tree(spec, 17);
    CHECK(is_tree(tree.graph));
    CHECK(tree.graph.degree(tree.root) == spec.root_degree);
    REQUIRE(tree.usable_radius >= 1);
    const auto depth = bfs_distances(tree.graph, tree.root);
    for (NodeId v = 0; v < tree.graph.node_count(); ++v) {
      if (v == tree.root || depth[v] > spec.core_depth) continue;
      const auto sphere = arm_spheres(tree.graph, tree.root, v, tree.usable_radius);
      for (std::uint32_t r = 1; r <= tree.usable_radius; ++r) {
        const double scale = std::pow(r, spec.alpha);
        CHECK(sphere[r] >= spec.b * scale - 1e-9);
        CHECK(sphere[r] <= spec.c * scale + 1e-9);
      }
    }
    CHECK(check_geometric(tree.graph, tree.root, spec.alpha, spec.b, spec.c, spec.core_depth).ok);
  }

  const auto lines = geometric_tree({0, 1, 2, 3, 10, 1}, 0);
  for (NodeId v = 0; v < lines.graph.node_count(); ++v) {
    if (v != lines.root) CHECK(lines.graph.degree(v) <= 2);
  }

  const auto a = geometric_tree({1, 1, 4, 3, 20, 1}, 5);
  const auto b = geometric_tree({1, 1, 4, 3, 20, 1}, 5);
  CHECK(a.graph == b.graph);
  CHECK(a.root == b.root);

  CHECK(kind_of([] { geometric_tree({1, 2, 1, 3, 10, 1}, 0); }) == ErrorKind::InvalidArgument);
  // Quadratic growth seen from both of the first two levels has no
  // caterpillar realization; the generator says so instead of guessing.
  CHECK(kind_of([] { geometric_tree({2, 1, 3, 5, 12, 2}, 0); }) == ErrorKind::ConstructionFailed);
  GeometricTreeSpec th5{1, 1, 4, 3, 20, 1};
  CHECK_FALSE(th5.meets_degree_condition());
  th5.root_degree = 6;
  CHECK(th5.meets_degree_condition());
}
