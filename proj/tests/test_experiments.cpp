#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "rumor/config.hpp"
#include "rumor/error.hpp"
#include "rumor/experiments.hpp"

using namespace rumor;
using namespace rumor::experiments;

namespace {

ExperimentConfig regular(std::uint32_t d, std::uint64_t trials, std::size_t n, std::uint64_t seed = 0) {
  ExperimentConfig cfg;
  cfg.family = Family::regular_tree(d);
  cfg.stop = StopRule::at_count(n);
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.k_max = 10;
  cfg.workers = 1;
  return cfg;
}

std::string csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_histogram_csv(out, r);
  return out.str();
}

void check_histogram(const ExperimentResult& r) {
  CHECK(std::accumulate(r.counts.begin(), r.counts.end(), std::uint64_t{0}) == r.trials);
  CHECK(std::accumulate(r.rank_counts.begin(), r.rank_counts.end(), std::uint64_t{0}) == r.trials);
  double total = 0;
  for (const auto& row : r.rows()) {
    CHECK(row.proportion >= 0);
    CHECK(row.proportion <= 1);
    CHECK(row.ci.lo <= row.proportion);
    CHECK(row.ci.hi >= row.proportion);
    total += row.proportion;
  }
  CHECK(total == doctest::Approx(1.0));
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

TEST_CASE("single node observations are always detected") {
  const auto r = run_experiment(regular(3, 1, 1));
  CHECK(r.trials == 1);
  CHECK(r.detection() == 1.0);
  const auto er = er_experiment(200, 5, 1, 20, 3, 10, 1);
  CHECK(er.detection() == 1.0);
  check_histogram(er);
}

TEST_CASE("regular tree detection") {
  const auto r3 = run_experiment(regular(3, 10000, 400));
  check_histogram(r3);
  CHECK(std::abs(r3.detection() - 0.25) <= 0.03);
  REQUIRE(r3.theory);
  CHECK(r3.theory->values.size() == 10);
  const auto cmp = compare_to_theory(r3, 3);
  CHECK(cmp.max_deviation < 0.03);
  CHECK_FALSE(cmp.any_flagged);

  const auto r4 = run_experiment(regular(4, 10000, 400, 1));
  CHECK(std::abs(r4.detection() - 0.273) <= 0.03);
  for (std::uint32_t k = 1; k <= 10; ++k) {
    if (r4.counts[k - 1] > 0) CHECK(r4.proportion(k) <= theory::ck_upper_bound(k));
  }
  // Curves for d >= 4 lie on top of each other.
  const auto r6 = run_experiment(regular(6, 10000, 400, 2));
  for (std::uint32_t k = 1; k <= 10; ++k) CHECK(std::abs(r4.proportion(k) - r6.proportion(k)) < 0.04);
  check_histogram(r6);
}

TEST_CASE("theory comparison errors") {
  ExperimentResult empty;
  empty.config = regular(3, 1, 10);
  CHECK(kind_of([&] { compare_to_theory(empty, 3); }) == ErrorKind::InvalidArgument);
  const auto r = run_experiment(regular(3, 50, 30));
  CHECK(kind_of([&] { compare_to_theory(r, 4); }) == ErrorKind::InvalidArgument);
  auto cfg = regular(3, 50, 30);
  cfg.family = Family::random_regular(100, 3);
  const auto rr = run_experiment(cfg);
  CHECK(kind_of([&] { compare_to_theory(rr, 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("results do not depend on the worker count") {
  std::vector<ExperimentConfig> cfgs;
  cfgs.push_back(regular(3, 300, 100, 5));
  auto gw = regular(3, 200, 60, 6);
  gw.family = Family::galton_watson(OffspringSpec::poisson(3), OffspringSpec::poisson(1.5));
  cfgs.push_back(gw);
  auto geo = regular(3, 100, 80, 7);
  geo.family = Family::geometric_tree({1, 1, 1.5, 4, 30, 1});
  geo.dist = SpreadingTimeSpec::uniform(0.5, 1.5);
  cfgs.push_back(geo);
  auto er = regular(3, 100, 40, 8);
  er.family = Family::erdos_renyi(400, 4);
  cfgs.push_back(er);
  auto rr = regular(3, 100, 40, 9);
  rr.family = Family::random_regular(200, 3);
  rr.dist = SpreadingTimeSpec::gamma(2, 2);
  cfgs.push_back(rr);
  for (auto cfg : cfgs) {
    cfg.workers = 1;
    const auto one = run_experiment(cfg);
    cfg.workers = 8;
    const auto eight = run_experiment(cfg);
    CHECK(csv(one) == csv(eight));
    CHECK(one.attempts == eight.attempts);
    check_histogram(one);
    const auto again = run_experiment(cfg);
    CHECK(csv(again) == csv(eight));
  }
}

TEST_CASE("single trials match the batch run") {
  const auto cfg = regular(4, 40, 50, 3);
  const auto r = run_experiment(cfg);
  std::vector<std::uint64_t> counts(cfg.k_max + 1, 0);
  for (std::uint64_t i = 0; i < cfg.trials; ++i) {
    const auto t = run_trial(cfg, i);
    CHECK(t.accepted);
    CHECK(t.infected == 50);
    ++counts[t.chosen_order >= 1 && t.chosen_order <= cfg.k_max ? t.chosen_order - 1 : cfg.k_max];
  }
  CHECK(counts == r.counts);
}

TEST_CASE("galton watson trials") {
  const auto reg = random_tree_detection(OffspringSpec::deterministic(3), OffspringSpec::deterministic(2),
                                         SpreadingTimeSpec::exponential(1), StopRule::at_count(400), 5000, 4, 10,
                                         {1.5}, 1);
  CHECK(std::abs(reg.result.detection() - 0.25) <= 0.03);
  CHECK(reg.result.attempts == 5000);

  const auto poi = random_tree_detection(OffspringSpec::poisson(3), OffspringSpec::poisson(1.5),
                                         SpreadingTimeSpec::uniform(0.5, 1.5), StopRule::at_count(100), 500, 5, 8,
                                         {1.1, 1.5, 2.0}, 1);
  CHECK(poi.result.trials == 500);
  CHECK(poi.result.attempts > 500);  // some runs die out and are discarded
  check_histogram(poi.result);
  CHECK(poi.conditional.size() == 3 * 7);
  for (const auto& row : poi.conditional) {
    CHECK(row.hits <= row.conditioned);
    CHECK(row.bound == doctest::Approx(1.0 / row.k));
  }

  CHECK(kind_of([] {
          random_tree_detection(OffspringSpec::deterministic(2), OffspringSpec::poisson(3),
                                SpreadingTimeSpec::exponential(1), StopRule::at_count(50), 10, 0);
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] {
          random_tree_detection(OffspringSpec::poisson(3), OffspringSpec::poisson(0.9),
                                SpreadingTimeSpec::exponential(1), StopRule::at_count(50), 10, 0);
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] {
          random_tree_detection(OffspringSpec::poisson(3), OffspringSpec::poisson(3),
                                SpreadingTimeSpec::exponential(1), StopRule::at_time(5), 10, 0);
        }) == ErrorKind::InvalidArgument);

  // Mean 1.2 but survival below one percent: 100 survivors cannot be
  // collected within the attempt budget.
  std::vector<double> probs(601, 0);
  probs[0] = 0.998;
  probs[600] = 0.002;
  try {
    random_tree_detection(OffspringSpec::deterministic(3), OffspringSpec::categorical(probs),
                          SpreadingTimeSpec::exponential(1), StopRule::at_count(200), 100, 0, 10, {1.5}, 1);
    FAIL("expected extinction failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
    CHECK(std::string(e.what()).find("of 100 trials") != std::string::npos);
  }
}

TEST_CASE("geometric detection") {
  CHECK(kind_of([] {
          geometric_detection({1, 1, 4, 3, 20, 1}, SpreadingTimeSpec::uniform(0.5, 1.5), {1, 2}, 10, 0);
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] {
          geometric_detection({1, 1, 1.5, 4, 20, 1}, SpreadingTimeSpec::uniform(0.5, 1.5), {3, 2}, 10, 0);
        }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] {
          geometric_detection({1, 2, 1.5, 4, 20, 1}, SpreadingTimeSpec::uniform(0.5, 1.5), {1, 2}, 10, 0);
        }) == ErrorKind::InvalidArgument);

  const auto line = geometric_detection({0, 1, 1, 2, 300, 1}, SpreadingTimeSpec::uniform(0.5, 1.5),
                                        {5, 20, 50, 100}, 2000, 1, 1);
  REQUIRE(line.points.size() == 4);
  for (std::size_t i = 1; i < line.points.size(); ++i) {
    CHECK(line.points[i].proportion < line.points[i - 1].proportion);
  }
  CHECK(line.points.back().proportion < 0.2);
  // Theta(1/sqrt(t)): quadrupling t roughly halves detection.
  CHECK(line.points[3].proportion / line.points[1].proportion == doctest::Approx(0.5).epsilon(0.25));

  const auto geo = geometric_detection({1, 1, 1.5, 4, 40, 1}, SpreadingTimeSpec::uniform(0.5, 1.5), {3, 5, 10, 20},
                                       500, 2, 1);
  for (const auto& p : geo.points) CHECK(p.fringe_fraction == 0);
  CHECK(geo.points.back().proportion >= 0.9);
}

TEST_CASE("er experiment") {
  const auto r = er_experiment(500, 8, 50, 200, 1, 10, 1);
  check_histogram(r);
  CHECK(r.trials == 200);
  CHECK_FALSE(r.theory);
  CHECK(kind_of([] { er_experiment(500, 8, 600, 10, 1); }) == ErrorKind::Infeasible);
  // Subcritical hosts rarely have a component of 50 nodes: trials
  // resample, and give up when no draw is large enough.
  const auto sparse = er_experiment(2000, 0.7, 50, 20, 2, 10, 1);
  CHECK(sparse.trials == 20);
  CHECK(sparse.resamples > 0);
  CHECK(kind_of([] { er_experiment(2000, 0.5, 50, 5, 2, 10, 1); }) == ErrorKind::Infeasible);
}

TEST_CASE("config validation") {
  auto bad = regular(3, 0, 10);
  CHECK(kind_of([&] { run_experiment(bad); }) == ErrorKind::InvalidArgument);
  auto rr = regular(3, 10, 10);
  rr.family = Family::random_regular(7, 3);
  CHECK(kind_of([&] { run_experiment(rr); }) == ErrorKind::Infeasible);
  auto exhausted = regular(3, 10, 100);
  exhausted.family = Family::geometric_tree({0, 1, 2, 2, 20, 1});
  CHECK(kind_of([&] { run_experiment(exhausted); }) == ErrorKind::ExhaustedGraph);
  try {
    run_experiment(exhausted);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
}

TEST_CASE("JSON configs") {
  const auto cfg = parse_experiment_config(R"({"family": "galton_watson",
      "family_params": {"d0": "poisson:3", "d": "cat:0.25,0,0.75"},
      "dist": "unif:0.5,1.5", "stop": "count:200", "trials": 50, "master_seed": 12, "k_max": 8})");
  CHECK(cfg.family.kind == Family::Kind::GaltonWatson);
  CHECK(cfg.family.law.mean() == doctest::Approx(1.5));
  CHECK(cfg.dist == SpreadingTimeSpec::uniform(0.5, 1.5));
  CHECK(cfg.stop == StopRule::at_count(200));
  CHECK(cfg.trials == 50);
  CHECK(cfg.master_seed == 12);
  CHECK(cfg.k_max == 8);

  const auto back = parse_experiment_config(experiment_config_to_json(cfg));
  CHECK(experiment_config_to_json(back) == experiment_config_to_json(cfg));

  const auto geo = parse_experiment_config(R"({"family": "geometric", "family_params":
      {"alpha": 1, "b": 1, "c": 1.5, "root_degree": 4, "depth": 30}})");
  CHECK(geo.family.geometric.core_depth == 1);
  CHECK(geo.trials == ExperimentConfig{}.trials);

  for (const char* text : {"[]", "{", R"({"family": "lattice"})", R"({"family": "regular_tree"})",
                           R"({"family": "regular_tree", "family_params": {"d": "x"}})",
                           R"({"family": "regular_tree", "family_params": {"d": 3}, "colour": 1})"}) {
    CHECK(kind_of([&] { parse_experiment_config(text); }) == ErrorKind::Parse);
  }
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/config.json"), Error);
}

TEST_CASE("output formats") {
  const auto r = run_experiment(regular(3, 100, 20, 1));
  const std::string text = csv(r);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,count,proportion,ci_lo,ci_hi,theory");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 11);
  CHECK(last.rfind("overflow,", 0) == 0);
  CHECK(last.back() == ',');  // no theory for the overflow bucket

  auto er = regular(3, 20, 10, 1);
  er.family = Family::erdos_renyi(100, 5);
  const std::string er_csv = csv(run_experiment(er));
  CHECK(er_csv.find("\n1,") != std::string::npos);
  std::istringstream er_in(er_csv);
  std::getline(er_in, line);
  std::getline(er_in, line);
  CHECK(line.back() == ',');

  std::ostringstream plot;
  write_plot_data(plot, r);
  CHECK(plot.str().rfind("# family regular_tree", 0) == 0);
}
