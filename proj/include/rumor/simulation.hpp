#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rumor/graph.hpp"
#include "rumor/host.hpp"
#include "rumor/spreading_time.hpp"

namespace rumor {

/// When to take the snapshot of the infected graph.
struct StopRule {
  enum class Kind { AtTime, AtCount };

  Kind kind = Kind::AtCount;
  double time = 0.0;
  std::size_t count = 1;

  static StopRule at_time(double t);
  static StopRule at_count(std::size_t n);

  /// Parses `time:T` or `count:N`.
  static StopRule parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const StopRule&, const StopRule&) = default;
};

struct InfectionEvent {
  NodeId node = 0;
  double time = 0.0;
  NodeId parent = kNoNode;

  friend bool operator==(const InfectionEvent&, const InfectionEvent&) = default;
};

/// Chronological infection record. events[0] is the source at time 0 and
/// every parent appears before its child.
struct InfectionHistory {
  NodeId source = 0;
  std::vector<InfectionEvent> events;

  std::size_t size() const noexcept { return events.size(); }
  /// n(t): number of events with time <= t.
  std::size_t count_by(double t) const;

  friend bool operator==(const InfectionHistory&, const InfectionHistory&) = default;
};

/// Event-driven SI spreading with i.i.d. edge delays. Deterministic given
/// the seed. Throws ExhaustedGraph when an at_count target is unreachable.
InfectionHistory simulate_si(Host& host, NodeId source, const SpreadingTimeSpec& dist,
                             const StopRule& stop, std::uint64_t seed);
InfectionHistory simulate_si(const Graph& g, NodeId source, const SpreadingTimeSpec& dist,
                             const StopRule& stop, std::uint64_t seed);

/// Exponential-only reference simulator: repeatedly infects the far end of
/// a uniformly chosen boundary edge. Used to cross-check simulate_si.
InfectionHistory simulate_uniform_boundary(Host& host, NodeId source, double rate,
                                           const StopRule& stop, std::uint64_t seed);

/// Infected nodes relabeled for the estimator. Only the graph is meant to
/// be handed to the estimator; the maps are harness bookkeeping.
struct ObservedGraph {
  Graph graph;
  std::vector<NodeId> host_node;              // local id -> host id
  std::vector<std::uint32_t> infection_order;  // local id -> 1-based k
};

/// Graph over infected nodes built from parent edges; local id i is the
/// (i+1)-th infected node.
Graph infected_subgraph(const InfectionHistory& h);
ObservedGraph observe_tree(const InfectionHistory& h);

/// Host-induced subgraph on the infected nodes. Local ids follow ascending
/// host id so labels carry no infection-order information.
ObservedGraph observe_induced(const InfectionHistory& h, const Graph& host);

/// Uninfected nodes adjacent to the nodes infected by time t.
std::size_t boundary_size(const InfectionHistory& h, Host& host, double t);

/// {"source":..,"events":[{"node":..,"time":..,"parent":..|null}]} with
/// times rounded to 12 significant digits.
std::string history_to_json(const InfectionHistory& h);
InfectionHistory history_from_json(const std::string& text);

}  // namespace rumor
