#pragma once

#include <span>

#include "rumor/graph.hpp"

namespace rumor {

/// Graph the simulator walks. Lazy generators materialize neighbors on
/// first request, so the host is non-const.
class Host {
 public:
  virtual ~Host() = default;

  /// Neighbors of v. The span stays valid until the next call.
  virtual std::span<const NodeId> neighbors(NodeId v) = 0;

  /// Number of node ids handed out so far (upper bound on valid ids).
  virtual std::size_t known_nodes() const = 0;
};

/// Adapter over an explicit, fully materialized graph.
class GraphHost final : public Host {
 public:
  explicit GraphHost(const Graph& g) : g_(g) {}

  std::span<const NodeId> neighbors(NodeId v) override { return g_.neighbors(v); }
  std::size_t known_nodes() const override { return g_.node_count(); }

  const Graph& graph() const { return g_; }

 private:
  const Graph& g_;
};

}  // namespace rumor
