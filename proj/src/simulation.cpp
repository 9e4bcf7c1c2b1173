#include "rumor/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>

#include <json.hpp>

#include "rumor/error.hpp"

namespace rumor {

namespace {

struct Arrival {
  double time;
  std::uint64_t seq;  // push order; deterministic tie-break for atomic laws
  NodeId node;
  NodeId parent;

  bool operator>(const Arrival& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

void ensure_size(std::vector<std::uint8_t>& flags, std::size_t n) {
  if (flags.size() < n) flags.resize(std::max(n, flags.size() * 2), 0);
}

void check_source(Host& host, NodeId source) {
  if (source >= host.known_nodes()) {
    fail(ErrorKind::InvalidArgument, "source " + std::to_string(source) + " out of range");
  }
}

[[noreturn]] void exhausted(std::size_t reached, std::size_t wanted) {
  fail(ErrorKind::ExhaustedGraph, "reachable set has " + std::to_string(reached) +
                                      " nodes, stop rule wants " + std::to_string(wanted));
}

double round12(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", t);
  return std::strtod(buf, nullptr);
}

}  // namespace

StopRule StopRule::at_time(double t) {
  if (!(t > 0) || !std::isfinite(t)) fail(ErrorKind::InvalidArgument, "stop time must be > 0");
  return StopRule{Kind::AtTime, t, 0};
}

StopRule StopRule::at_count(std::size_t n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "stop count must be >= 1");
  return StopRule{Kind::AtCount, 0.0, n};
}

StopRule StopRule::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::Parse, "stop rule '" + text + "' lacks ':'");
  auto key = text.substr(0, colon);
  auto value = text.substr(colon + 1);
  char* end = nullptr;
  if (key == "time") {
    double t = std::strtod(value.c_str(), &end);
    if (value.empty() || *end) fail(ErrorKind::Parse, "bad stop time '" + value + "'");
    return at_time(t);
  }
  if (key == "count") {
    long long n = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || *end || n < 1) fail(ErrorKind::Parse, "bad stop count '" + value + "'");
    return at_count(static_cast<std::size_t>(n));
  }
  fail(ErrorKind::Parse, "unknown stop rule '" + key + "'");
}

std::string StopRule::to_string() const {
  if (kind == Kind::AtCount) return "count:" + std::to_string(count);
  char buf[48];
  std::snprintf(buf, sizeof buf, "time:%.12g", time);
  return buf;
}

std::size_t InfectionHistory::count_by(double t) const {
  auto it = std::upper_bound(events.begin(), events.end(), t,
                             [](double value, const InfectionEvent& e) { return value < e.time; });
  return static_cast<std::size_t>(it - events.begin());
}

InfectionHistory simulate_si(Host& host, NodeId source, const SpreadingTimeSpec& dist,
                             const StopRule& stop, std::uint64_t seed) {
  check_source(host, source);
  SpreadingTimeSampler sample(dist);
  Engine eng(seed);

  InfectionHistory h;
  h.source = source;
  std::vector<std::uint8_t> infected;
  std::priority_queue<Arrival, std::vector<Arrival>, std::greater<>> queue;
  std::uint64_t seq = 0;

  auto infect = [&](NodeId v, double t, NodeId parent) {
    ensure_size(infected, host.known_nodes());
    infected[v] = 1;
    h.events.push_back({v, t, parent});
  };
  auto done = [&] {
    return stop.kind == StopRule::Kind::AtCount && h.events.size() >= stop.count;
  };

  infect(source, 0.0, kNoNode);
  NodeId current = source;
  while (!done()) {
    for (NodeId w : host.neighbors(current)) {
      ensure_size(infected, host.known_nodes());
      if (!infected[w]) queue.push({h.events.back().time + sample(eng), seq++, w, current});
    }
    // Later arrivals at an already infected node lose the race.
    while (!queue.empty() && infected[queue.top().node]) queue.pop();
    if (queue.empty()) {
      if (stop.kind == StopRule::Kind::AtCount) exhausted(h.events.size(), stop.count);
      break;
    }
    Arrival next = queue.top();
    if (stop.kind == StopRule::Kind::AtTime && next.time > stop.time) break;
    queue.pop();
    infect(next.node, next.time, next.parent);
    current = next.node;
  }
  return h;
}

InfectionHistory simulate_si(const Graph& g, NodeId source, const SpreadingTimeSpec& dist,
                             const StopRule& stop, std::uint64_t seed) {
  GraphHost host(g);
  return simulate_si(host, source, dist, stop, seed);
}

InfectionHistory simulate_uniform_boundary(Host& host, NodeId source, double rate,
                                           const StopRule& stop, std::uint64_t seed) {
  check_source(host, source);
  if (!(rate > 0)) fail(ErrorKind::InvalidArgument, "rate must be > 0");
  Engine eng(seed);

  InfectionHistory h;
  h.source = source;
  std::vector<std::uint8_t> infected;
  std::vector<Edge> boundary;  // (infected parent, candidate)
  std::size_t live_edges = 0;  // boundary edges whose far end is uninfected
  double now = 0.0;

  auto infect = [&](NodeId v, NodeId parent) {
    ensure_size(infected, host.known_nodes());
    infected[v] = 1;
    h.events.push_back({v, now, parent});
    std::size_t into = 0;
    for (NodeId w : host.neighbors(v)) {
      ensure_size(infected, host.known_nodes());
      if (infected[w]) {
        ++into;
      } else {
        boundary.emplace_back(v, w);
        ++live_edges;
      }
    }
    // Every edge from an infected neighbor into v just went stale.
    live_edges -= into;
  };

  infect(source, kNoNode);
  while (stop.kind != StopRule::Kind::AtCount || h.events.size() < stop.count) {
    if (live_edges == 0) {
      if (stop.kind == StopRule::Kind::AtCount) exhausted(h.events.size(), stop.count);
      break;
    }
    // Next arrival of a rate-`rate` race over the live edges.
    double dt = -std::log(uniform01_open_low(eng)) / (rate * static_cast<double>(live_edges));
    if (stop.kind == StopRule::Kind::AtTime && now + dt > stop.time) break;
    now += dt;
    for (;;) {
      std::size_t i = uniform_index(eng, boundary.size());
      Edge e = boundary[i];
      boundary[i] = boundary.back();
      boundary.pop_back();
      if (!infected[e.second]) {
        infect(e.second, e.first);
        break;
      }
    }
  }
  return h;
}

Graph infected_subgraph(const InfectionHistory& h) { return observe_tree(h).graph; }

ObservedGraph observe_tree(const InfectionHistory& h) {
  ObservedGraph out;
  const std::size_t n = h.events.size();
  out.host_node.resize(n);
  out.infection_order.resize(n);
  std::vector<std::pair<NodeId, std::uint32_t>> index;  // host id -> local, sorted
  index.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.host_node[i] = h.events[i].node;
    out.infection_order[i] = static_cast<std::uint32_t>(i + 1);
    index.emplace_back(h.events[i].node, static_cast<std::uint32_t>(i));
  }
  std::sort(index.begin(), index.end());
  auto local_of = [&](NodeId host) {
    auto it = std::lower_bound(index.begin(), index.end(), std::pair<NodeId, std::uint32_t>{host, 0});
    return it->second;
  };
  std::vector<Edge> edges;
  edges.reserve(n ? n - 1 : 0);
  for (std::size_t i = 1; i < n; ++i) {
    edges.emplace_back(local_of(h.events[i].parent), static_cast<NodeId>(i));
  }
  out.graph = Graph::from_edges(edges, n);
  return out;
}

ObservedGraph observe_induced(const InfectionHistory& h, const Graph& host) {
  ObservedGraph out;
  const std::size_t n = h.events.size();
  std::vector<std::pair<NodeId, std::uint32_t>> by_host;
  by_host.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    by_host.emplace_back(h.events[i].node, static_cast<std::uint32_t>(i + 1));
  }
  std::sort(by_host.begin(), by_host.end());
  out.host_node.reserve(n);
  out.infection_order.reserve(n);
  for (auto [node, k] : by_host) {
    out.host_node.push_back(node);
    out.infection_order.push_back(k);
  }
  out.graph = induced_subgraph(host, out.host_node);
  return out;
}

std::size_t boundary_size(const InfectionHistory& h, Host& host, double t) {
  const std::size_t n = h.count_by(t);
  std::vector<std::uint8_t> state;  // 1 infected, 2 counted boundary
  auto mark = [&](NodeId v, std::uint8_t s) {
    ensure_size(state, std::max<std::size_t>(host.known_nodes(), v + std::size_t{1}));
    state[v] = s;
  };
  for (std::size_t i = 0; i < n; ++i) mark(h.events[i].node, 1);
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId w : host.neighbors(h.events[i].node)) {
      ensure_size(state, host.known_nodes());
      if (state[w] == 0) {
        state[w] = 2;
        ++count;
      }
    }
  }
  return count;
}

std::string history_to_json(const InfectionHistory& h) {
  nlohmann::ordered_json doc;
  doc["source"] = h.source;
  auto& events = doc["events"] = nlohmann::ordered_json::array();
  for (const auto& e : h.events) {
    nlohmann::ordered_json ev;
    ev["node"] = e.node;
    ev["time"] = round12(e.time);
    ev["parent"] = e.parent == kNoNode ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(e.parent);
    events.push_back(std::move(ev));
  }
  return doc.dump();
}

InfectionHistory history_from_json(const std::string& text) {
  InfectionHistory h;
  try {
    auto doc = nlohmann::json::parse(text);
    h.source = doc.at("source").get<NodeId>();
    for (const auto& ev : doc.at("events")) {
      InfectionEvent e;
      e.node = ev.at("node").get<NodeId>();
      e.time = ev.at("time").get<double>();
      e.parent = ev.at("parent").is_null() ? kNoNode : ev.at("parent").get<NodeId>();
      h.events.push_back(e);
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::Parse, std::string("bad history JSON: ") + ex.what());
  }
  return h;
}

}  // namespace rumor
