#include "rumor/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rumor/error.hpp"

namespace rumor {

OffspringSpec OffspringSpec::deterministic(std::uint32_t d) {
  OffspringSpec s;
  s.kind = Kind::Deterministic;
  s.count = d;
  return s;
}

OffspringSpec OffspringSpec::poisson(double mean) {
  OffspringSpec s;
  s.kind = Kind::Poisson;
  s.mean_value = mean;
  s.validate();
  return s;
}

OffspringSpec OffspringSpec::categorical(std::vector<double> probs) {
  OffspringSpec s;
  s.kind = Kind::Categorical;
  s.probs = std::move(probs);
  s.validate();
  return s;
}

OffspringSpec OffspringSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::Parse, "offspring law '" + text + "' lacks ':'");
  std::string name = text.substr(0, colon);
  std::vector<double> args;
  std::stringstream fields(text.substr(colon + 1));
  std::string item;
  while (std::getline(fields, item, ',')) {
    char* end = nullptr;
    double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end) fail(ErrorKind::Parse, "bad number '" + item + "' in offspring law");
    args.push_back(v);
  }
  if (name == "det" && args.size() == 1 && args[0] >= 0 && args[0] == std::floor(args[0])) {
    return deterministic(static_cast<std::uint32_t>(args[0]));
  }
  if (name == "poisson" && args.size() == 1) return poisson(args[0]);
  if (name == "cat" && !args.empty()) return categorical(args);
  fail(ErrorKind::Parse, "bad offspring law '" + text + "'");
}

std::string OffspringSpec::to_string() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Deterministic: out << "det:" << count; break;
    case Kind::Poisson: out << "poisson:" << mean_value; break;
    case Kind::Categorical:
      out << "cat:";
      for (std::size_t i = 0; i < probs.size(); ++i) out << (i ? "," : "") << probs[i];
      break;
  }
  return out.str();
}

void OffspringSpec::validate() const {
  switch (kind) {
    case Kind::Deterministic: return;
    case Kind::Poisson:
      if (!(mean_value > 0) || !std::isfinite(mean_value)) {
        fail(ErrorKind::InvalidArgument, "poisson mean must be > 0");
      }
      return;
    case Kind::Categorical: {
      if (probs.empty()) fail(ErrorKind::InvalidArgument, "categorical law needs probabilities");
      double total = 0;
      for (double p : probs) {
        if (!(p >= 0)) fail(ErrorKind::InvalidArgument, "negative probability");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-9) fail(ErrorKind::InvalidArgument, "probabilities must sum to 1");
      return;
    }
  }
}

double OffspringSpec::mean() const {
  switch (kind) {
    case Kind::Deterministic: return count;
    case Kind::Poisson: return mean_value;
    case Kind::Categorical: {
      double m = 0;
      for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
      return m;
    }
  }
  return 0;
}

double OffspringSpec::pgf(double s) const {
  switch (kind) {
    case Kind::Deterministic: return std::pow(s, count);
    case Kind::Poisson: return std::exp(mean_value * (s - 1.0));
    case Kind::Categorical: {
      double acc = 0;  // Horner
      for (std::size_t k = probs.size(); k-- > 0;) acc = acc * s + probs[k];
      return acc;
    }
  }
  return 0;
}

double OffspringSpec::pmf(std::uint32_t k) const {
  switch (kind) {
    case Kind::Deterministic: return k == count ? 1.0 : 0.0;
    case Kind::Poisson:
      return std::exp(k * std::log(mean_value) - mean_value - std::lgamma(k + 1.0));
    case Kind::Categorical: return k < probs.size() ? probs[k] : 0.0;
  }
  return 0;
}

OffspringSampler::OffspringSampler(const OffspringSpec& spec)
    : spec_(spec),
      poisson_(spec.kind == OffspringSpec::Kind::Poisson ? spec.mean_value : 1.0),
      categorical_(spec.kind == OffspringSpec::Kind::Categorical
                       ? std::discrete_distribution<std::uint32_t>(spec.probs.begin(), spec.probs.end())
                       : std::discrete_distribution<std::uint32_t>()) {
  spec_.validate();
}

std::uint32_t OffspringSampler::operator()(Engine& eng) {
  switch (spec_.kind) {
    case OffspringSpec::Kind::Deterministic: return spec_.count;
    case OffspringSpec::Kind::Poisson: return poisson_(eng);
    case OffspringSpec::Kind::Categorical: return categorical_(eng);
  }
  return 0;
}

LazyTree::LazyTree(const OffspringSpec& d0, const OffspringSpec& d, std::uint64_t seed)
    : root_law_(d0), law_(d), eng_(seed) {
  parent_.push_back(kNoNode);
  first_child_.push_back(kNoNode);
  n_children_.push_back(0);
}

void LazyTree::expand(NodeId v) {
  if (first_child_[v] != kNoNode) return;
  const std::uint32_t k = v == 0 ? root_law_(eng_) : law_(eng_);
  const auto first = static_cast<NodeId>(parent_.size());
  if (parent_.size() + k >= kNoNode) fail(ErrorKind::EventCapReached, "lazy tree exceeded id space");
  first_child_[v] = first;
  n_children_[v] = k;
  parent_.insert(parent_.end(), k, v);
  first_child_.insert(first_child_.end(), k, kNoNode);
  n_children_.insert(n_children_.end(), k, 0);
}

std::span<const NodeId> LazyTree::neighbors(NodeId v) {
  expand(v);
  scratch_.clear();
  if (parent_[v] != kNoNode) scratch_.push_back(parent_[v]);
  for (std::uint32_t i = 0; i < n_children_[v]; ++i) scratch_.push_back(first_child_[v] + i);
  return scratch_;
}

std::uint32_t LazyTree::child_count(NodeId v) {
  expand(v);
  return n_children_[v];
}

std::size_t LazyTree::materialize_radius(std::uint32_t r) {
  std::vector<NodeId> layer{0}, next;
  std::size_t total = 1;
  for (std::uint32_t depth = 0; depth < r && !layer.empty(); ++depth) {
    next.clear();
    for (NodeId v : layer) {
      expand(v);
      for (std::uint32_t i = 0; i < n_children_[v]; ++i) next.push_back(first_child_[v] + i);
    }
    total += next.size();
    layer.swap(next);
  }
  return total;
}

Graph LazyTree::to_graph() const {
  std::vector<Edge> edges;
  edges.reserve(parent_.size());
  for (NodeId v = 1; v < parent_.size(); ++v) edges.emplace_back(parent_[v], v);
  return Graph::from_edges(edges, parent_.size());
}

LazyTree regular_tree(std::uint32_t d) {
  if (d < 2) fail(ErrorKind::InvalidArgument, "regular tree needs d >= 2");
  return LazyTree(OffspringSpec::deterministic(d), OffspringSpec::deterministic(d - 1), 0);
}

LazyTree galton_watson(const OffspringSpec& d0, const OffspringSpec& d, std::uint64_t seed) {
  return LazyTree(d0, d, seed);
}

Graph erdos_renyi(std::size_t m, double c, std::uint64_t seed) {
  if (m < 1) fail(ErrorKind::InvalidArgument, "erdos_renyi needs m >= 1");
  if (!(c >= 0) || c > static_cast<double>(m)) {
    fail(ErrorKind::InvalidArgument, "erdos_renyi needs 0 <= c <= m");
  }
  const double p = c / static_cast<double>(m);
  std::vector<Edge> edges;
  if (p >= 1.0) {
    for (NodeId v = 1; v < m; ++v)
      for (NodeId w = 0; w < v; ++w) edges.emplace_back(w, v);
    return Graph::from_edges(edges, m);
  }
  if (p > 0) {
    // Geometric skipping over the lower triangle (Batagelj-Brandes).
    Engine eng(seed);
    edges.reserve(static_cast<std::size_t>(c * static_cast<double>(m) / 2 * 1.1) + 16);
    const double log_q = std::log1p(-p);
    long long v = 1, w = -1;
    const auto mm = static_cast<long long>(m);
    while (v < mm) {
      double skip = std::floor(std::log(uniform01_open_low(eng)) / log_q);
      w += 1 + static_cast<long long>(std::min(skip, 9.0e15));
      while (w >= v && v < mm) {
        w -= v;
        ++v;
      }
      if (v < mm) edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
    }
  }
  return Graph::from_edges(edges, m);
}

Graph random_regular(std::size_t m, std::uint32_t d, std::uint64_t seed, std::size_t max_attempts) {
  if (d >= m) fail(ErrorKind::Infeasible, "random_regular needs d < m");
  if ((m * d) % 2 != 0) fail(ErrorKind::Infeasible, "random_regular needs m*d even");
  Engine eng(seed);
  std::vector<NodeId> points(m * d);
  std::vector<Edge> edges(points.size() / 2);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<NodeId>(i / d);
    for (std::size_t i = points.size(); i > 1; --i) {
      std::swap(points[i - 1], points[uniform_index(eng, i)]);
    }
    bool simple = true;
    for (std::size_t i = 0; i < edges.size() && simple; ++i) {
      NodeId u = points[2 * i], v = points[2 * i + 1];
      if (u == v) simple = false;
      edges[i] = {std::min(u, v), std::max(u, v)};
    }
    if (!simple) continue;
    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    return Graph::from_edges(sorted, m);
  }
  fail(ErrorKind::Infeasible, "random_regular: no simple pairing within attempt budget");
}

}  // namespace rumor
