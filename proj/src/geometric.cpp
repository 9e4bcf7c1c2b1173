#include <algorithm>
#include <cmath>
#include <numeric>

#include "rumor/error.hpp"
#include "rumor/generators.hpp"

namespace rumor {

namespace {

// Small slack so b r^alpha with an integer-valued product is not rejected
// by rounding noise in pow().
constexpr double kSlack = 1e-9;

struct ArmInfo {
  NodeId top;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> level;  // indexed by position in `nodes`
  std::uint32_t height = 0;
};

}  // namespace

void GeometricTreeSpec::validate() const {
  if (!(alpha >= 0) || !std::isfinite(alpha)) fail(ErrorKind::InvalidArgument, "alpha must be >= 0");
  if (!(b > 0) || !(c >= b) || !std::isfinite(c)) fail(ErrorKind::InvalidArgument, "need 0 < b <= c");
  if (root_degree < 1) fail(ErrorKind::InvalidArgument, "root degree must be >= 1");
  if (depth < 1) fail(ErrorKind::InvalidArgument, "depth must be >= 1");
  if (core_depth < 1 || core_depth > depth) {
    fail(ErrorKind::InvalidArgument, "core depth must lie in [1, depth]");
  }
}

bool GeometricTreeSpec::meets_degree_condition() const {
  return static_cast<double>(root_degree) > std::max(2.0, c / b + 1.0);
}

GeometricCheck check_geometric(const Graph& g, NodeId root, double alpha, double b, double c,
                               std::uint32_t core_depth) {
  if (root >= g.node_count()) fail(ErrorKind::InvalidArgument, "root out of range");
  if (core_depth < 1) fail(ErrorKind::InvalidArgument, "core depth must be >= 1");
  const std::size_t n = g.node_count();

  // Partition the non-root nodes into arms and record arm levels.
  std::vector<NodeId> arm_of(n, kNoNode);
  std::vector<std::uint32_t> level(n, 0);
  std::vector<ArmInfo> arms;
  auto tops = g.neighbors(root);
  for (NodeId top : tops) {
    ArmInfo arm;
    arm.top = top;
    const auto id = static_cast<NodeId>(arms.size());
    arm_of[top] = id;
    arm.nodes.push_back(top);
    for (std::size_t head = 0; head < arm.nodes.size(); ++head) {
      NodeId u = arm.nodes[head];
      for (NodeId w : g.neighbors(u)) {
        if (w == root || arm_of[w] != kNoNode) continue;
        arm_of[w] = id;
        level[w] = level[u] + 1;
        arm.height = std::max(arm.height, level[w]);
        arm.nodes.push_back(w);
      }
    }
    arms.push_back(std::move(arm));
  }

  GeometricCheck result;
  if (arms.empty()) return result;
  std::uint32_t min_height = arms.front().height;
  for (const auto& arm : arms) min_height = std::min(min_height, arm.height);
  const std::uint32_t slack = core_depth - 1;
  result.usable_radius = min_height > slack ? min_height - slack : 0;
  const std::uint32_t radius = result.usable_radius;
  if (radius == 0) return result;

  std::vector<double> lower(radius + 1), upper(radius + 1);
  for (std::uint32_t r = 1; r <= radius; ++r) {
    const double scale = std::pow(static_cast<double>(r), alpha);
    lower[r] = b * scale * (1 - kSlack);
    upper[r] = c * scale * (1 + kSlack);
  }

  std::vector<std::uint32_t> dist(n, 0);
  std::vector<NodeId> stamp(n, kNoNode);
  std::vector<NodeId> queue;
  std::vector<std::size_t> sphere(radius + 1);
  for (std::uint32_t a = 0; a < arms.size(); ++a) {
    std::vector<NodeId> core;
    for (NodeId v : arms[a].nodes) {
      if (level[v] < core_depth) core.push_back(v);
    }
    std::sort(core.begin(), core.end());
    for (NodeId v : core) {
      std::fill(sphere.begin(), sphere.end(), 0);
      queue.assign(1, v);
      stamp[v] = v;
      dist[v] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId u = queue[head];
        if (dist[u] == radius) continue;
        for (NodeId w : g.neighbors(u)) {
          if (arm_of[w] != a || stamp[w] == v) continue;
          stamp[w] = v;
          dist[w] = dist[u] + 1;
          ++sphere[dist[w]];
          queue.push_back(w);
        }
      }
      for (std::uint32_t r = 1; r <= radius; ++r) {
        const auto count = static_cast<double>(sphere[r]);
        if (count < lower[r] || count > upper[r]) {
          result.ok = false;
          result.witness = GeometricViolation{a, v, r, sphere[r]};
          return result;
        }
      }
    }
  }
  return result;
}

namespace {

// Children per node at each arm level for a given width profile.
using Assignment = std::vector<std::vector<std::uint32_t>>;

Assignment assign_balanced(const std::vector<std::uint32_t>& width) {
  Assignment out(width.size());
  for (std::size_t s = 0; s + 1 < width.size(); ++s) {
    out[s].assign(width[s], width[s + 1] / width[s]);
    for (std::uint32_t i = 0; i < width[s + 1] % width[s]; ++i) ++out[s][i];
  }
  if (!width.empty()) out.back().assign(width.back(), 0);
  return out;
}

// One spine node per level carries all the growth; the rest continue as
// single-child strands (or end when the next level is narrower).
Assignment assign_caterpillar(const std::vector<std::uint32_t>& width) {
  Assignment out(width.size());
  for (std::size_t s = 0; s + 1 < width.size(); ++s) {
    out[s].assign(width[s], 0);
    std::uint32_t left = width[s + 1];
    for (std::uint32_t i = width[s]; i-- > 1 && left > 1;) {
      out[s][i] = 1;
      --left;
    }
    out[s][0] = left;
  }
  if (!width.empty()) out.back().assign(width.back(), 0);
  return out;
}

Graph build_arms(std::uint32_t arms, const Assignment& assign, std::vector<NodeId>& label) {
  std::vector<Edge> edges;
  NodeId next = 1;  // root is 0 before relabeling
  for (std::uint32_t a = 0; a < arms; ++a) {
    const NodeId top = next++;
    edges.emplace_back(0, top);
    std::vector<NodeId> layer{top}, below;
    for (std::size_t s = 0; s < assign.size(); ++s) {
      below.clear();
      for (std::size_t i = 0; i < layer.size(); ++i) {
        for (std::uint32_t k = 0; k < assign[s][i]; ++k) {
          edges.emplace_back(layer[i], next);
          below.push_back(next++);
        }
      }
      layer.swap(below);
    }
  }
  for (auto& [u, v] : edges) {
    u = label[u];
    v = label[v];
  }
  return Graph::from_edges(edges, next);
}

}  // namespace

GeometricTree geometric_tree(const GeometricTreeSpec& spec, std::uint64_t seed) {
  spec.validate();

  // Width candidates: w(s) = round(m s^alpha) clamped into the integer
  // range allowed at the arm top, for multipliers m spread over [b, c].
  std::vector<double> multipliers{std::sqrt(spec.b * spec.c)};
  for (double f : {0.5, 0.25, 0.75, 0.0, 1.0, 0.1, 0.9}) {
    multipliers.push_back(spec.b + f * (spec.c - spec.b));
  }

  for (double m : multipliers) {
    std::vector<std::uint32_t> width(spec.depth, 1);
    bool feasible = true;
    for (std::uint32_t s = 1; s < spec.depth && feasible; ++s) {
      const double scale = std::pow(static_cast<double>(s), spec.alpha);
      const double lo = std::ceil(spec.b * scale * (1 - kSlack));
      const double hi = std::floor(spec.c * scale * (1 + kSlack));
      if (lo > hi || hi < 1) {
        feasible = false;
        break;
      }
      width[s] = static_cast<std::uint32_t>(std::clamp(std::round(m * scale), std::max(lo, 1.0), hi));
    }
    if (!feasible) break;  // arm-top bound has no integer solution at some level

    const std::size_t arm_nodes = std::accumulate(width.begin(), width.end(), std::size_t{0});
    const std::size_t n = 1 + spec.root_degree * arm_nodes;
    std::vector<NodeId> label(n);
    std::iota(label.begin(), label.end(), 0);
    Engine eng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(label[i - 1], label[uniform_index(eng, i)]);

    for (int strategy = 0; strategy < 2; ++strategy) {
      Assignment assign = strategy == 0 ? assign_balanced(width) : assign_caterpillar(width);
      Graph g = build_arms(spec.root_degree, assign, label);
      auto check = check_geometric(g, label[0], spec.alpha, spec.b, spec.c, spec.core_depth);
      if (check.ok) {
        return GeometricTree{std::move(g), label[0], check.usable_radius, width,
                             strategy == 0 ? "balanced" : "caterpillar"};
      }
    }
  }
  fail(ErrorKind::ConstructionFailed,
       "no caterpillar-of-levels candidate satisfies the growth bounds for this spec");
}

}  // namespace rumor
