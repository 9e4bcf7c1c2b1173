#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rumor/graph.hpp"
#include "rumor/host.hpp"
#include "rumor/rng.hpp"

namespace rumor {

/// Offspring law of a Galton-Watson tree.
struct OffspringSpec {
  enum class Kind { Deterministic, Poisson, Categorical };

  Kind kind = Kind::Deterministic;
  std::uint32_t count = 0;          // Deterministic
  double mean_value = 0.0;          // Poisson
  std::vector<double> probs;        // Categorical over {0, 1, ..., K}

  static OffspringSpec deterministic(std::uint32_t d);
  static OffspringSpec poisson(double mean);
  static OffspringSpec categorical(std::vector<double> probs);

  /// `det:D`, `poisson:MEAN` or `cat:P0,P1,...`.
  static OffspringSpec parse(const std::string& text);
  std::string to_string() const;

  void validate() const;
  double mean() const;
  /// Probability generating function f(s) = E[s^eta].
  double pgf(double s) const;
  /// P(eta = k).
  double pmf(std::uint32_t k) const;
};

class OffspringSampler {
 public:
  explicit OffspringSampler(const OffspringSpec& spec);
  std::uint32_t operator()(Engine& eng);

 private:
  OffspringSpec spec_;
  std::poisson_distribution<std::uint32_t> poisson_;
  std::discrete_distribution<std::uint32_t> categorical_;
};

/// Rooted tree grown on demand: the root draws its child count from d0,
/// every other node from d. Node 0 is the root; children of a node get
/// consecutive ids the first time that node is expanded.
class LazyTree final : public Host {
 public:
  LazyTree(const OffspringSpec& d0, const OffspringSpec& d, std::uint64_t seed);

  std::span<const NodeId> neighbors(NodeId v) override;
  std::size_t known_nodes() const override { return parent_.size(); }

  NodeId root() const { return 0; }
  /// Number of children of v (expands v).
  std::uint32_t child_count(NodeId v);
  NodeId parent(NodeId v) const { return parent_[v]; }
  /// Expands every node within distance r of the root and returns the
  /// number of nodes at distance <= r.
  std::size_t materialize_radius(std::uint32_t r);
  /// The materialized part as an explicit graph.
  Graph to_graph() const;

 private:
  void expand(NodeId v);

  OffspringSampler root_law_;
  OffspringSampler law_;
  Engine eng_;
  std::vector<NodeId> parent_;
  std::vector<NodeId> first_child_;       // kNoNode until expanded
  std::vector<std::uint32_t> n_children_;
  std::vector<NodeId> scratch_;
};

/// d-regular tree: root has d children, everyone else d - 1. d >= 2.
LazyTree regular_tree(std::uint32_t d);

LazyTree galton_watson(const OffspringSpec& d0, const OffspringSpec& d, std::uint64_t seed);

/// G(m, p) with p = c / m; c = 0 gives the empty graph. Requires c <= m.
Graph erdos_renyi(std::size_t m, double c, std::uint64_t seed);

/// Simple d-regular graph on m nodes via the pairing model, restarting on
/// any self-loop or multi-edge. Throws Infeasible when m*d is odd or d >= m.
Graph random_regular(std::size_t m, std::uint32_t d, std::uint64_t seed,
                     std::size_t max_attempts = 100000);

// Geometric trees ------------------------------------------------------

struct GeometricTreeSpec {
  double alpha = 1.0;
  double b = 1.0;
  double c = 2.0;
  std::uint32_t root_degree = 3;
  std::uint32_t depth = 20;     // levels per arm below the root
  std::uint32_t core_depth = 1; // checked nodes: arm levels < core_depth

  void validate() const;
  /// Degree condition d* > max(2, c/b + 1) needed for the detection limit.
  bool meets_degree_condition() const;
};

struct GeometricViolation {
  std::uint32_t arm = 0;  // index of the root subtree
  NodeId node = 0;
  std::uint32_t radius = 0;
  std::size_t count = 0;  // observed n(v, r)
};

struct GeometricCheck {
  bool ok = true;
  std::uint32_t usable_radius = 0;
  std::optional<GeometricViolation> witness;
};

/// Verifies b r^alpha <= n^i(v, r) <= c r^alpha for every node v of every
/// root subtree lying at arm level < core_depth (arm level 0 is the root's
/// neighbor) and every 1 <= r <= usable radius, where the usable radius is
/// the shallowest arm's height minus (core_depth - 1). n^i counts nodes of
/// the same root subtree only. Arms are visited in ascending id of their
/// top node; the first violation found is returned.
GeometricCheck check_geometric(const Graph& g, NodeId root, double alpha, double b, double c,
                               std::uint32_t core_depth = 1);

struct GeometricTree {
  Graph graph;
  NodeId root = 0;
  std::uint32_t usable_radius = 0;
  std::vector<std::uint32_t> level_width;  // nodes per arm level
  std::string strategy;
};

/// Builds d* identical "caterpillar-of-levels" arms whose level widths are
/// searched deterministically and validated with check_geometric. Throws
/// ConstructionFailed when no candidate passes. The seed only permutes
/// node labels.
GeometricTree geometric_tree(const GeometricTreeSpec& spec, std::uint64_t seed);

}  // namespace rumor
