#include "rumor/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rumor/centrality.hpp"
#include "rumor/error.hpp"
#include "rumor/rng.hpp"

namespace rumor::experiments {

namespace {

// Host graphs redrawn per trial before giving up on an ER / regular family.
constexpr std::uint32_t kMaxResamples = 1000;

struct TrialContext {
  std::optional<GeometricTree> geometric;
};

TrialContext make_context(const ExperimentConfig& cfg) {
  TrialContext ctx;
  if (cfg.family.kind == Family::Kind::Geometric) {
    ctx.geometric = rumor::geometric_tree(cfg.family.geometric, cfg.master_seed);
  }
  return ctx;
}

void score(const ObservedGraph& obs, std::uint64_t tie_seed, TrialOutcome& out) {
  const auto est = estimate_source(obs.graph, tie_seed);
  out.chosen_order = obs.infection_order[est.chosen];
  for (NodeId v = 0; v < obs.infection_order.size(); ++v) {
    if (obs.infection_order[v] == 1) {
      out.source_rank = static_cast<std::uint32_t>(rank_of_node(est.report, v));
      break;
    }
  }
  out.infected = static_cast<std::uint32_t>(obs.graph.node_count());
  out.accepted = true;
}

TrialOutcome tree_trial(const ExperimentConfig& cfg, LazyTree& host, std::uint64_t seed) {
  TrialOutcome out;
  InfectionHistory h;
  try {
    h = simulate_si(host, host.root(), cfg.dist, cfg.stop, derive_seed(seed, Stream::Spread));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ExhaustedGraph) throw;
    return out;  // the random tree died out before the stop count
  }
  score(observe_tree(h), derive_seed(seed, Stream::TieBreak), out);
  const std::size_t k = std::min<std::size_t>(cfg.k_max, h.size());
  out.children.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.children.push_back(host.child_count(h.events[i].node));
  return out;
}

TrialOutcome graph_trial(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto& fam = cfg.family;
  const std::size_t need = cfg.stop.kind == StopRule::Kind::AtCount ? cfg.stop.count : 1;
  const std::uint64_t graph_seed = derive_seed(seed, Stream::Graph);
  Engine pick(derive_seed(seed, Stream::Source));
  for (std::uint32_t attempt = 0; attempt < kMaxResamples; ++attempt) {
    const std::uint64_t s = derive_seed(graph_seed, attempt);
    Graph host = fam.kind == Family::Kind::ErdosRenyi ? erdos_renyi(fam.m, fam.c, s)
                                                      : random_regular(fam.m, fam.d, s);
    std::size_t n_comp = 0;
    const auto label = component_labels(host, &n_comp);
    std::vector<std::size_t> size(n_comp, 0);
    for (NodeId l : label) ++size[l];

    std::vector<NodeId> pool;
    if (fam.kind == Family::Kind::ErdosRenyi) {
      // Source is uniform over the largest component (lowest label on ties).
      const auto giant = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());
      if (size[giant] < need) continue;
      for (NodeId v = 0; v < host.node_count(); ++v)
        if (label[v] == giant) pool.push_back(v);
    } else {
      for (NodeId v = 0; v < host.node_count(); ++v)
        if (size[label[v]] >= need) pool.push_back(v);
      if (pool.empty()) continue;
    }
    const NodeId source = pool[uniform_index(pick, pool.size())];
    if (size[label[source]] < need) continue;

    TrialOutcome out;
    const auto h = simulate_si(host, source, cfg.dist, cfg.stop, derive_seed(seed, Stream::Spread));
    score(observe_induced(h, host), derive_seed(seed, Stream::TieBreak), out);
    out.resamples = attempt;
    return out;
  }
  fail(ErrorKind::Infeasible, "no host graph with a large enough component after " +
                                  std::to_string(kMaxResamples) + " draws");
}

TrialOutcome run_trial_with(const ExperimentConfig& cfg, const TrialContext& ctx, std::uint64_t index) {
  const std::uint64_t seed = derive_seed(cfg.master_seed, index);
  try {
    switch (cfg.family.kind) {
      case Family::Kind::RegularTree: {
        LazyTree host = regular_tree(cfg.family.d);
        return tree_trial(cfg, host, seed);
      }
      case Family::Kind::GaltonWatson: {
        LazyTree host(cfg.family.root_law, cfg.family.law, derive_seed(seed, Stream::Graph));
        return tree_trial(cfg, host, seed);
      }
      case Family::Kind::Geometric: {
        const auto& tree = *ctx.geometric;
        TrialOutcome out;
        const auto h = simulate_si(tree.graph, tree.root, cfg.dist, cfg.stop, derive_seed(seed, Stream::Spread));
        score(observe_tree(h), derive_seed(seed, Stream::TieBreak), out);
        return out;
      }
      case Family::Kind::ErdosRenyi:
      case Family::Kind::RandomRegular:
        return graph_trial(cfg, seed);
    }
  } catch (const Error& e) {
    throw Error(e.kind(), "trial " + std::to_string(index) + ": " + e.what());
  }
  return {};
}

struct Collected {
  std::vector<TrialOutcome> outcomes;  // accepted only, by attempt index
  std::uint64_t attempts = 0;
};

Collected collect(const ExperimentConfig& cfg) {
  cfg.validate();
  const TrialContext ctx = make_context(cfg);
  std::function<TrialOutcome(std::uint64_t)> task;
  Collected got;
  if (cfg.family.kind != Family::Kind::GaltonWatson) {
    task = [&](std::uint64_t i) { return run_trial_with(cfg, ctx, i); };
    got.outcomes = run_indexed(cfg.trials, cfg.workers, task);
    got.attempts = cfg.trials;
    return got;
  }
  // Extinct runs are discarded; keep drawing attempt indices in batches and
  // keep the first `trials` survivors in index order.
  const std::uint64_t max_attempts = std::max<std::uint64_t>(cfg.trials * 100, 1000);
  while (got.outcomes.size() < cfg.trials && got.attempts < max_attempts) {
    const std::uint64_t missing = cfg.trials - got.outcomes.size();
    const std::uint64_t batch = std::min(max_attempts - got.attempts, missing + missing / 4 + 16);
    const std::uint64_t base = got.attempts;
    task = [&](std::uint64_t i) { return run_trial_with(cfg, ctx, base + i); };
    for (auto& out : run_indexed(batch, cfg.workers, task)) {
      ++got.attempts;
      if (out.accepted) got.outcomes.push_back(std::move(out));
      if (got.outcomes.size() == cfg.trials) break;
    }
  }
  if (got.outcomes.size() < cfg.trials) {
    fail(ErrorKind::Infeasible, "only " + std::to_string(got.outcomes.size()) + " of " +
                                    std::to_string(cfg.trials) + " trials survived extinction in " +
                                    std::to_string(got.attempts) + " attempts");
  }
  return got;
}

ExperimentResult aggregate(const ExperimentConfig& cfg, const Collected& got) {
  ExperimentResult res;
  res.config = cfg;
  res.attempts = got.attempts;
  res.trials = got.outcomes.size();
  res.counts.assign(cfg.k_max + 1, 0);
  res.rank_counts.assign(cfg.k_max + 1, 0);
  auto bucket = [&](std::uint32_t k) { return k >= 1 && k <= cfg.k_max ? k - 1 : cfg.k_max; };
  for (const auto& out : got.outcomes) {
    ++res.counts[bucket(out.chosen_order)];
    ++res.rank_counts[bucket(out.source_rank)];
    res.resamples += out.resamples;
  }
  if (cfg.family.kind == Family::Kind::RegularTree && cfg.family.d >= 3 &&
      cfg.dist.kind == SpreadingTimeSpec::Kind::Exponential) {
    res.theory = theory::theory_curve(cfg.family.d, cfg.k_max);
  }
  return res;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

Graph sample_graph(const Family& family, std::uint32_t radius, std::uint64_t seed) {
  switch (family.kind) {
    case Family::Kind::RegularTree: {
      LazyTree t = regular_tree(family.d);
      t.materialize_radius(radius);
      return t.to_graph();
    }
    case Family::Kind::GaltonWatson: {
      family.root_law.validate();
      family.law.validate();
      LazyTree t(family.root_law, family.law, derive_seed(seed, Stream::Graph));
      t.materialize_radius(radius);
      return t.to_graph();
    }
    case Family::Kind::Geometric:
      return rumor::geometric_tree(family.geometric, seed).graph;
    case Family::Kind::ErdosRenyi:
      return erdos_renyi(family.m, family.c, derive_seed(seed, Stream::Graph));
    case Family::Kind::RandomRegular:
      return random_regular(family.m, family.d, derive_seed(seed, Stream::Graph));
  }
  return {};
}

InfectionHistory simulate_family(const Family& family, const SpreadingTimeSpec& dist,
                                 const StopRule& stop, std::uint64_t seed) {
  const std::uint64_t spread = derive_seed(seed, Stream::Spread);
  switch (family.kind) {
    case Family::Kind::RegularTree: {
      if (family.d < 2) fail(ErrorKind::InvalidArgument, "regular tree needs d >= 2");
      LazyTree t = regular_tree(family.d);
      return simulate_si(t, t.root(), dist, stop, spread);
    }
    case Family::Kind::GaltonWatson: {
      family.root_law.validate();
      family.law.validate();
      LazyTree t(family.root_law, family.law, derive_seed(seed, Stream::Graph));
      return simulate_si(t, t.root(), dist, stop, spread);
    }
    case Family::Kind::Geometric: {
      const auto tree = rumor::geometric_tree(family.geometric, seed);
      return simulate_si(tree.graph, tree.root, dist, stop, spread);
    }
    case Family::Kind::ErdosRenyi:
    case Family::Kind::RandomRegular: {
      const Graph g = sample_graph(family, 0, seed);
      if (g.node_count() == 0) fail(ErrorKind::InvalidArgument, "empty host graph");
      std::size_t n_comp = 0;
      const auto label = component_labels(g, &n_comp);
      std::vector<std::size_t> size(n_comp, 0);
      for (NodeId l : label) ++size[l];
      const auto giant = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());
      std::vector<NodeId> pool;
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (label[v] == giant) pool.push_back(v);
      Engine pick(derive_seed(seed, Stream::Source));
      return simulate_si(g, pool[uniform_index(pick, pool.size())], dist, stop, spread);
    }
  }
  return {};
}

Family Family::regular_tree(std::uint32_t d) {
  Family f;
  f.kind = Kind::RegularTree;
  f.d = d;
  return f;
}

Family Family::galton_watson(const OffspringSpec& d0, const OffspringSpec& d) {
  Family f;
  f.kind = Kind::GaltonWatson;
  f.root_law = d0;
  f.law = d;
  return f;
}

Family Family::geometric_tree(const GeometricTreeSpec& spec) {
  Family f;
  f.kind = Kind::Geometric;
  f.geometric = spec;
  return f;
}

Family Family::erdos_renyi(std::size_t m, double c) {
  Family f;
  f.kind = Kind::ErdosRenyi;
  f.m = m;
  f.c = c;
  return f;
}

Family Family::random_regular(std::size_t m, std::uint32_t d) {
  Family f;
  f.kind = Kind::RandomRegular;
  f.m = m;
  f.d = d;
  return f;
}

std::string Family::name() const {
  switch (kind) {
    case Kind::RegularTree: return "regular_tree";
    case Kind::GaltonWatson: return "galton_watson";
    case Kind::Geometric: return "geometric";
    case Kind::ErdosRenyi: return "erdos_renyi";
    case Kind::RandomRegular: return "random_regular";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be >= 1");
  if (k_max < 1) fail(ErrorKind::InvalidArgument, "k_max must be >= 1");
  dist.validate();
  switch (family.kind) {
    case Family::Kind::RegularTree:
      if (family.d < 2) fail(ErrorKind::InvalidArgument, "regular tree needs d >= 2");
      break;
    case Family::Kind::GaltonWatson:
      family.root_law.validate();
      family.law.validate();
      break;
    case Family::Kind::Geometric:
      family.geometric.validate();
      break;
    case Family::Kind::ErdosRenyi:
      if (family.m < 1 || !(family.c >= 0) || family.c > static_cast<double>(family.m)) {
        fail(ErrorKind::InvalidArgument, "erdos_renyi needs m >= 1 and 0 <= c <= m");
      }
      if (stop.kind == StopRule::Kind::AtCount && stop.count > family.m) {
        fail(ErrorKind::Infeasible, "stop count exceeds the host size");
      }
      break;
    case Family::Kind::RandomRegular:
      if (family.d >= family.m || (family.m * family.d) % 2) {
        fail(ErrorKind::Infeasible, "random_regular needs d < m and m*d even");
      }
      if (stop.kind == StopRule::Kind::AtCount && stop.count > family.m) {
        fail(ErrorKind::Infeasible, "stop count exceeds the host size");
      }
      break;
  }
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

double ExperimentResult::proportion(std::uint32_t k) const {
  if (trials == 0 || k < 1 || k > counts.size()) return 0.0;
  return static_cast<double>(counts[k - 1]) / static_cast<double>(trials);
}

std::vector<HistogramRow> ExperimentResult::rows() const {
  std::vector<HistogramRow> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    HistogramRow row;
    row.k = i < config.k_max ? static_cast<std::uint32_t>(i + 1) : 0;
    row.count = counts[i];
    row.proportion = trials ? static_cast<double>(counts[i]) / static_cast<double>(trials) : 0.0;
    row.ci = stats::wilson(counts[i], trials);
    if (theory && row.k >= 1) row.theory = theory->values[row.k - 1].value;
    out.push_back(row);
  }
  return out;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t index) {
  cfg.validate();
  return run_trial_with(cfg, make_context(cfg), index);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult res = aggregate(cfg, collect(cfg));
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

TheoryComparison compare_to_theory(const ExperimentResult& result, std::uint32_t d, double allowance) {
  if (result.trials == 0) fail(ErrorKind::InvalidArgument, "empty experiment result");
  if (result.config.family.kind != Family::Kind::RegularTree || result.config.family.d != d) {
    fail(ErrorKind::InvalidArgument, "theory comparison needs a " + std::to_string(d) +
                                         "-regular tree experiment, got " + result.config.family.name());
  }
  TheoryComparison cmp;
  cmp.d = d;
  cmp.allowance = allowance;
  for (std::uint32_t k = 1; k <= result.config.k_max; ++k) {
    TheoryRow row;
    row.k = k;
    row.empirical = result.proportion(k);
    row.theory = theory::ck_limit(d, k);
    row.deviation = std::abs(row.empirical - row.theory);
    row.ci = stats::wilson(result.counts[k - 1], result.trials);
    row.flagged = row.theory < row.ci.lo - allowance || row.theory > row.ci.hi + allowance;
    cmp.max_deviation = std::max(cmp.max_deviation, row.deviation);
    cmp.any_flagged = cmp.any_flagged || row.flagged;
    cmp.rows.push_back(row);
  }
  return cmp;
}

GeometricDetection geometric_detection(const GeometricTreeSpec& spec, const SpreadingTimeSpec& dist,
                                       const std::vector<double>& times, std::uint64_t trials,
                                       std::uint64_t seed, unsigned workers) {
  spec.validate();
  dist.validate();
  if (spec.alpha > 0 && !spec.meets_degree_condition()) {
    fail(ErrorKind::InvalidArgument, "root degree must exceed max(2, c/b + 1)");
  }
  if (times.empty() || !std::is_sorted(times.begin(), times.end()) || !(times.front() > 0)) {
    fail(ErrorKind::InvalidArgument, "observation times must be positive and ascending");
  }
  if (trials < 1) fail(ErrorKind::InvalidArgument, "trials must be >= 1");

  GeometricDetection out;
  out.tree = rumor::geometric_tree(spec, seed);
  const auto& tree = out.tree;
  const auto depth = bfs_distances(tree.graph, tree.root);
  const NodeId fringe_level = *std::max_element(depth.begin(), depth.end());

  struct PerTrial {
    std::vector<std::uint8_t> detected, fringe;
    std::vector<std::uint32_t> infected;
  };
  std::function<PerTrial(std::uint64_t)> task = [&](std::uint64_t i) {
    const std::uint64_t s = derive_seed(seed, i);
    const auto full = simulate_si(tree.graph, tree.root, dist, StopRule::at_time(times.back()),
                                  derive_seed(s, Stream::Spread));
    PerTrial r;
    InfectionHistory prefix;
    prefix.source = full.source;
    bool reached = false;
    std::size_t scanned = 0;
    for (double t : times) {
      const std::size_t n = full.count_by(t);
      prefix.events.assign(full.events.begin(), full.events.begin() + static_cast<std::ptrdiff_t>(n));
      for (; scanned < n; ++scanned) reached = reached || depth[full.events[scanned].node] >= fringe_level;
      TrialOutcome o;
      score(observe_tree(prefix), derive_seed(s, Stream::TieBreak), o);
      r.detected.push_back(o.chosen_order == 1);
      r.fringe.push_back(reached);
      r.infected.push_back(static_cast<std::uint32_t>(n));
    }
    return r;
  };
  const auto per_trial = run_indexed(trials, workers, task);

  for (std::size_t j = 0; j < times.size(); ++j) {
    DetectionPoint p;
    p.time = times[j];
    p.trials = trials;
    double infected = 0, fringe = 0;
    for (const auto& r : per_trial) {
      p.detected += r.detected[j];
      infected += r.infected[j];
      fringe += r.fringe[j];
    }
    p.proportion = static_cast<double>(p.detected) / static_cast<double>(trials);
    p.ci = stats::wilson(p.detected, trials);
    p.mean_infected = infected / static_cast<double>(trials);
    p.fringe_fraction = fringe / static_cast<double>(trials);
    out.points.push_back(p);
  }
  return out;
}

RandomTreeDetection random_tree_detection(const OffspringSpec& d0, const OffspringSpec& d,
                                          const SpreadingTimeSpec& dist, const StopRule& stop,
                                          std::uint64_t trials, std::uint64_t seed, std::uint32_t k_max,
                                          const std::vector<double>& c_values, unsigned workers) {
  if (stop.kind != StopRule::Kind::AtCount) {
    fail(ErrorKind::InvalidArgument, "random tree detection conditions on reaching a stop count");
  }
  d0.validate();
  d.validate();
  if (1.0 - d0.pmf(0) - d0.pmf(1) - d0.pmf(2) <= 1e-15) {
    fail(ErrorKind::InvalidArgument, "root law needs P(eta0 >= 3) > 0");
  }
  if (!(d.mean() > 1.0)) fail(ErrorKind::InvalidArgument, "offspring mean must exceed 1");
  ExperimentConfig cfg;
  cfg.family = Family::galton_watson(d0, d);
  cfg.dist = dist;
  cfg.stop = stop;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.k_max = k_max;
  cfg.workers = workers;
  const auto start = std::chrono::steady_clock::now();
  const Collected got = collect(cfg);

  RandomTreeDetection out;
  out.result = aggregate(cfg, got);
  for (double c : c_values) {
    for (std::uint32_t k = 2; k <= k_max; ++k) {
      ConditionalRow row;
      row.c = c;
      row.k = k;
      row.bound = 1.0 / k;
      for (const auto& o : got.outcomes) {
        if (o.children.size() < k) continue;
        const double eta_k = o.children[k - 1];
        double before = 0;
        for (std::uint32_t i = 0; i + 1 < k; ++i) before += o.children[i];
        if (eta_k >= 2 && before >= c * k * eta_k) {
          ++row.conditioned;
          row.hits += o.chosen_order == k;
        }
      }
      row.proportion = row.conditioned ? static_cast<double>(row.hits) / static_cast<double>(row.conditioned) : 0.0;
      row.ci = stats::wilson(row.hits, row.conditioned);
      out.conditional.push_back(row);
    }
  }
  out.result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ExperimentResult er_experiment(std::size_t m, double c, std::size_t n, std::uint64_t trials,
                               std::uint64_t seed, std::uint32_t k_max, unsigned workers) {
  ExperimentConfig cfg;
  cfg.family = Family::erdos_renyi(m, c);
  cfg.dist = SpreadingTimeSpec::exponential(1.0);
  cfg.stop = StopRule::at_count(n);
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.k_max = k_max;
  cfg.workers = workers;
  return run_experiment(cfg);
}

void write_histogram_csv(std::ostream& out, const ExperimentResult& result) {
  out << "k,count,proportion,ci_lo,ci_hi,theory\n";
  for (const auto& row : result.rows()) {
    out << (row.k ? std::to_string(row.k) : std::string("overflow")) << ',' << row.count << ','
        << fmt(row.proportion) << ',' << fmt(row.ci.lo) << ',' << fmt(row.ci.hi) << ','
        << (row.theory ? fmt(*row.theory) : std::string()) << '\n';
  }
}

void write_detection_csv(std::ostream& out, const GeometricDetection& det) {
  out << "time,detected,trials,proportion,ci_lo,ci_hi,mean_infected,fringe_fraction\n";
  for (const auto& p : det.points) {
    out << fmt(p.time) << ',' << p.detected << ',' << p.trials << ',' << fmt(p.proportion) << ','
        << fmt(p.ci.lo) << ',' << fmt(p.ci.hi) << ',' << fmt(p.mean_infected) << ','
        << fmt(p.fringe_fraction) << '\n';
  }
}

void write_conditional_csv(std::ostream& out, const RandomTreeDetection& det) {
  out << "c,k,conditioned,hits,proportion,ci_lo,ci_hi,bound\n";
  for (const auto& r : det.conditional) {
    out << fmt(r.c) << ',' << r.k << ',' << r.conditioned << ',' << r.hits << ',' << fmt(r.proportion)
        << ',' << fmt(r.ci.lo) << ',' << fmt(r.ci.hi) << ',' << fmt(r.bound) << '\n';
  }
}

void write_plot_data(std::ostream& out, const ExperimentResult& result) {
  out << "# family " << result.config.family.name() << " dist " << result.config.dist.to_string()
      << " stop " << result.config.stop.to_string() << " trials " << result.trials << '\n';
  out << "# k proportion ci_lo ci_hi theory\n";
  for (const auto& row : result.rows()) {
    if (row.k == 0) continue;
    out << row.k << ' ' << fmt(row.proportion) << ' ' << fmt(row.ci.lo) << ' ' << fmt(row.ci.hi) << ' '
        << (row.theory ? fmt(*row.theory) : std::string("NaN")) << '\n';
  }
}

}  // namespace rumor::experiments
