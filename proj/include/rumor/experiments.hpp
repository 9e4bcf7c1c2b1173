#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rumor/generators.hpp"
#include "rumor/simulation.hpp"
#include "rumor/spreading_time.hpp"
#include "rumor/stats.hpp"
#include "rumor/theory.hpp"

namespace rumor::experiments {

/// Graph family a trial draws its host from.
struct Family {
  enum class Kind { RegularTree, GaltonWatson, Geometric, ErdosRenyi, RandomRegular };

  Kind kind = Kind::RegularTree;
  std::uint32_t d = 3;                 // regular tree degree / random regular degree
  OffspringSpec root_law;              // galton watson D0
  OffspringSpec law;                   // galton watson D
  GeometricTreeSpec geometric;
  std::size_t m = 0;                   // node count of ER / random regular hosts
  double c = 0.0;                      // ER mean degree

  static Family regular_tree(std::uint32_t d);
  static Family galton_watson(const OffspringSpec& d0, const OffspringSpec& d);
  static Family geometric_tree(const GeometricTreeSpec& spec);
  static Family erdos_renyi(std::size_t m, double c);
  static Family random_regular(std::size_t m, std::uint32_t d);

  std::string name() const;
  bool is_tree_family() const { return kind != Kind::ErdosRenyi && kind != Kind::RandomRegular; }
};

/// One host graph of the family. Lazy tree families are materialized to
/// `radius` levels around the root; the geometric tree uses the seed only
/// for its labels.
Graph sample_graph(const Family& family, std::uint32_t radius, std::uint64_t seed);

/// One spreading run on a fresh host. Trees spread from the root; ER and
/// random regular hosts from a uniform node of the largest component.
/// Seeds are derived from `seed` the same way a pipeline trial does.
InfectionHistory simulate_family(const Family& family, const SpreadingTimeSpec& dist,
                                 const StopRule& stop, std::uint64_t seed);

struct ExperimentConfig {
  Family family;
  SpreadingTimeSpec dist = SpreadingTimeSpec::exponential(1.0);
  StopRule stop = StopRule::at_count(400);
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::uint32_t k_max = 20;
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const;
};

/// What one trial observed.
struct TrialOutcome {
  bool accepted = false;            // false: extinct / discarded
  std::uint32_t chosen_order = 0;   // infection index k of the estimator's choice
  std::uint32_t source_rank = 0;    // ranking position of the true source
  std::uint32_t infected = 0;
  std::uint32_t resamples = 0;      // host graphs redrawn (ER / random regular)
  std::vector<std::uint32_t> children;  // eta_1..eta_K of the first K infected
};

struct HistogramRow {
  std::uint32_t k = 0;  // 0 marks the overflow bucket (k > k_max)
  std::uint64_t count = 0;
  double proportion = 0.0;
  stats::Interval ci;
  std::optional<double> theory;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::uint64_t trials = 0;          // accepted trials
  std::uint64_t attempts = 0;        // trials run, including discarded ones
  std::uint64_t resamples = 0;
  std::vector<std::uint64_t> counts;       // C^k counts, k = 1..k_max, then overflow
  std::vector<std::uint64_t> rank_counts;  // source rank counts, same layout
  std::optional<theory::TheoryCurve> theory;
  double wall_seconds = 0.0;

  double proportion(std::uint32_t k) const;
  double detection() const { return proportion(1); }
  std::vector<HistogramRow> rows() const;
};

unsigned resolve_workers(unsigned requested);

/// Runs `count` independent tasks on `workers` threads; results are stored
/// by task index so the outcome does not depend on scheduling. The
/// exception of the lowest failing index is rethrown.
template <class T>
std::vector<T> run_indexed(std::uint64_t count, unsigned workers,
                           const std::function<T(std::uint64_t)>& task) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < count;) {
      try {
        out[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(count, 1));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// One pipeline trial (generate, spread, estimate) with seeds derived from
/// (master_seed, index).
TrialOutcome run_trial(const ExperimentConfig& cfg, std::uint64_t index);

/// Histogram of C^k over cfg.trials accepted trials. Deterministic given
/// the config regardless of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct TheoryRow {
  std::uint32_t k = 0;
  double empirical = 0.0;
  double theory = 0.0;
  double deviation = 0.0;
  stats::Interval ci;
  bool flagged = false;
};

struct TheoryComparison {
  std::uint32_t d = 0;
  double allowance = 0.02;
  std::vector<TheoryRow> rows;
  double max_deviation = 0.0;
  bool any_flagged = false;
};

/// Compares the histogram with the regular-tree limit for k = 1..k_max.
/// A row is flagged when the limit lies outside the Wilson interval
/// widened by `allowance`.
TheoryComparison compare_to_theory(const ExperimentResult& result, std::uint32_t d,
                                   double allowance = 0.02);

struct DetectionPoint {
  double time = 0.0;
  std::uint64_t detected = 0;
  std::uint64_t trials = 0;
  double proportion = 0.0;
  stats::Interval ci;
  double mean_infected = 0.0;
  double fringe_fraction = 0.0;  // trials whose infection reached the last arm level
};

struct GeometricDetection {
  GeometricTree tree;
  std::vector<DetectionPoint> points;
};

/// Detection probability of the root of a verified geometric tree at each
/// observation time. Every trial is observed at all times (one spreading
/// run per trial). alpha = 0 is accepted as the line-like baseline; for
/// alpha > 0 the degree condition d* > max(2, c/b + 1) is enforced.
GeometricDetection geometric_detection(const GeometricTreeSpec& spec, const SpreadingTimeSpec& dist,
                                       const std::vector<double>& times, std::uint64_t trials,
                                       std::uint64_t seed, unsigned workers = 0);

struct ConditionalRow {
  double c = 0.0;
  std::uint32_t k = 0;
  std::uint64_t conditioned = 0;  // trials meeting eta_k >= 2 and sum_{i<k} eta_i >= c k eta_k
  std::uint64_t hits = 0;         // ... whose estimate was the k-th infected node
  double proportion = 0.0;
  stats::Interval ci;
  double bound = 0.0;             // 1/k
};

struct RandomTreeDetection {
  ExperimentResult result;
  std::vector<ConditionalRow> conditional;
};

/// Galton-Watson trees grown from the root; only runs that reach the stop
/// count are kept. Throws Infeasible (with the achieved count) when too
/// many runs go extinct.
RandomTreeDetection random_tree_detection(const OffspringSpec& d0, const OffspringSpec& d,
                                          const SpreadingTimeSpec& dist, const StopRule& stop,
                                          std::uint64_t trials, std::uint64_t seed,
                                          std::uint32_t k_max = 10,
                                          const std::vector<double>& c_values = {1.1, 1.5, 2.0},
                                          unsigned workers = 0);

/// Erdos-Renyi G(m, c/m) with exponential(1) spreading from a uniform node
/// of the largest component, stopped at n infected nodes.
ExperimentResult er_experiment(std::size_t m, double c, std::size_t n, std::uint64_t trials,
                               std::uint64_t seed, std::uint32_t k_max = 20, unsigned workers = 0);

void write_detection_csv(std::ostream& out, const GeometricDetection& det);
/// c,k,conditioned,hits,proportion,ci_lo,ci_hi,bound
void write_conditional_csv(std::ostream& out, const RandomTreeDetection& det);

// Output --------------------------------------------------------------

/// k,count,proportion,ci_lo,ci_hi,theory
void write_histogram_csv(std::ostream& out, const ExperimentResult& result);
/// Whitespace-separated columns for plotting tools.
void write_plot_data(std::ostream& out, const ExperimentResult& result);

}  // namespace rumor::experiments
