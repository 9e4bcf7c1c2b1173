#include "cli.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rumor/centrality.hpp"
#include "rumor/config.hpp"
#include "rumor/error.hpp"
#include "rumor/experiments.hpp"
#include "rumor/graph.hpp"
#include "rumor/oracles.hpp"
#include "rumor/rng.hpp"
#include "rumor/simulation.hpp"
#include "rumor/theory.hpp"

namespace rumor::cli {

namespace {

namespace ex = rumor::experiments;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Writes through a temporary file renamed into place; "-" or "" is `out`.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(out);
    out.flush();
    return;
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
    body(f);
    f.flush();
    if (!f) {
      std::filesystem::remove(tmp);
      fail(ErrorKind::InvalidArgument, "write to '" + path + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail(ErrorKind::InvalidArgument, "cannot move output into '" + path + "': " + ec.message());
  }
}

struct FamilyFlags {
  std::string name;
  std::uint32_t d = 3;
  std::string d0 = "poisson:3";
  std::string offspring = "poisson:3";
  double alpha = 1.0;
  double b = 1.0;
  std::optional<double> c;
  std::uint32_t root_degree = 3;
  std::uint32_t depth = 20;
  std::uint32_t core_depth = 1;
  std::size_t m = 1000;

  void add_to(CLI::App* app, bool required) {
    auto* opt = app->add_option("--family", name,
                                "graph family: regular_tree (regular), galton_watson (gw), geometric, "
                                "erdos_renyi (er), random_regular");
    if (required) opt->required();
    app->add_option("--d", d, "degree of the regular tree or random regular graph (edges per node)")
        ->capture_default_str();
    app->add_option("--d0", d0, "galton_watson root offspring law: det:D, poisson:MEAN, cat:P0,P1,...")
        ->capture_default_str();
    app->add_option("--offspring", offspring, "galton_watson offspring law of non-root nodes (same grammar)")
        ->capture_default_str();
    app->add_option("--alpha", alpha, "geometric growth exponent (dimensionless)")->capture_default_str();
    app->add_option("--b", b, "geometric lower constant b in b*r^alpha (nodes)")->capture_default_str();
    app->add_option("--c", c,
                    "geometric upper constant c in c*r^alpha (nodes); erdos_renyi mean degree c with p = c/m");
    app->add_option("--root-degree", root_degree, "geometric root degree d* (arms)")->capture_default_str();
    app->add_option("--depth", depth, "geometric arm depth (levels)")->capture_default_str();
    app->add_option("--core-depth", core_depth, "geometric checked arm levels (levels)")->capture_default_str();
    app->add_option("--m", m, "erdos_renyi / random_regular host size (nodes)")->capture_default_str();
  }

  ex::Family build() const {
    nlohmann::json p;
    if (name == "regular_tree" || name == "regular") {
      p = {{"d", d}};
    } else if (name == "galton_watson" || name == "gw") {
      p = {{"d0", d0}, {"d", offspring}};
    } else if (name == "geometric") {
      p = {{"alpha", alpha}, {"b", b}, {"c", c.value_or(2.0)}, {"root_degree", root_degree},
           {"depth", depth}, {"core_depth", core_depth}};
    } else if (name == "erdos_renyi" || name == "er") {
      if (!c) fail(ErrorKind::InvalidArgument, "erdos_renyi needs --c");
      p = {{"m", m}, {"c", *c}};
    } else if (name == "random_regular") {
      p = {{"m", m}, {"d", d}};
    }
    return family_from_json(name, p);
  }
};

CLI::Option* add_seed(CLI::App* app, std::uint64_t& seed) {
  return app->add_option("--seed", seed, "master seed, unsigned 64-bit (env RSL_SEED; default 0)")
      ->envname("RSL_SEED")
      ->capture_default_str();
}

CLI::Option* add_out(CLI::App* app, std::string& path, const std::string& what) {
  return app->add_option("--out", path, what + " (path; default stdout)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rumor source detection: SI spreading, rumor centrality and Monte Carlo checks", "rsl"};
  app.require_subcommand(1, 1);

  // generate
  auto* gen = app.add_subcommand("generate", "write one host graph of a family as an edge list");
  FamilyFlags gen_family;
  gen_family.add_to(gen, true);
  std::uint32_t gen_radius = 5;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--radius", gen_radius, "levels materialized around the root of lazy trees (levels)")
      ->capture_default_str();
  add_seed(gen, gen_seed);
  add_out(gen, gen_out, "edge list");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one SI spreading and write its infection history as JSON");
  FamilyFlags sim_family;
  sim_family.add_to(sim, false);
  std::string sim_graph, sim_dist = "exp:1", sim_stop, sim_out;
  NodeId sim_source = 0;
  std::uint64_t sim_seed = 0;
  auto* sim_graph_opt = sim->add_option("--graph", sim_graph, "edge list to spread on instead of a family (path)");
  sim->add_option("--source", sim_source, "source node when --graph is used (node id)")->capture_default_str();
  sim->add_option("--dist", sim_dist,
                  "edge spreading time: exp:RATE (1/time), det:VALUE, unif:LO,HI, gamma:SHAPE,RATE (time)")
      ->capture_default_str();
  sim->add_option("--stop", sim_stop, "observation rule: time:T (time) or count:N (infected nodes)")->required();
  add_seed(sim, sim_seed);
  add_out(sim, sim_out, "history JSON");
  sim->get_option("--family")->excludes(sim_graph_opt);

  // estimate
  auto* est = app.add_subcommand("estimate", "rank every node of an observed graph by rumor centrality");
  std::string est_graph, est_out;
  std::uint64_t est_seed = 0;
  est->add_option("--graph", est_graph, "observed graph as an edge list (path)")->required();
  add_seed(est, est_seed);
  add_out(est, est_out, "CSV node,log_centrality,rank,is_center");

  // theory
  auto* th = app.add_subcommand("theory", "tabulate the regular-tree detection limits");
  std::vector<std::uint64_t> th_d{3};
  std::uint64_t th_kmax = 20;
  std::string th_out, th_alpha_out;
  th->add_option("--d", th_d, "tree degrees d >= 3 (one or more)")->delimiter(',')->capture_default_str();
  th->add_option("--kmax", th_kmax, "largest infection index k (count)")->capture_default_str();
  add_out(th, th_out, "CSV d,k,ck_limit,ck_upper_bound");
  th->add_option("--alpha-out", th_alpha_out, "also write CSV d,alpha_d (path)");

  // oracle
  auto* orc = app.add_subcommand("oracle", "sample one of the reference processes and write the samples as CSV");
  std::string orc_name, orc_out, orc_offspring = "det:2", orc_dist = "exp:1";
  std::uint64_t orc_runs = 1000, orc_seed = 0, orc_type1 = 1, orc_type2 = 3, orc_add = 2, orc_steps = 10000;
  std::uint64_t orc_cap = 10'000'000;
  double orc_horizon = 6.0, orc_t = 10.0;
  std::vector<double> orc_times;
  orc->add_option("--name", orc_name, "polya, branching or renewal")
      ->required()
      ->check(CLI::IsMember({"polya", "branching", "renewal"}));
  orc->add_option("--runs", orc_runs, "independent samples (count)")->capture_default_str();
  orc->add_option("--type1", orc_type1, "polya: initial type-1 balls (count)")->capture_default_str();
  orc->add_option("--type2", orc_type2, "polya: initial type-2 balls (count)")->capture_default_str();
  orc->add_option("--add", orc_add, "polya: balls added per draw (count)")->capture_default_str();
  orc->add_option("--steps", orc_steps, "polya: draws per run (count)")->capture_default_str();
  orc->add_option("--offspring", orc_offspring, "branching: offspring law det:D, poisson:MEAN, cat:P0,...")
      ->capture_default_str();
  orc->add_option("--dist", orc_dist, "branching/renewal: lifetime law, same grammar as simulate --dist (time)")
      ->capture_default_str();
  orc->add_option("--horizon", orc_horizon, "branching: simulated horizon (time)")->capture_default_str();
  orc->add_option("--times", orc_times, "branching: sample times of Z(t), default the horizon (time)")->delimiter(',');
  orc->add_option("--event-cap", orc_cap, "branching: deaths before a run is truncated (count)")
      ->capture_default_str();
  orc->add_option("--t", orc_t, "renewal: observation time (time)")->capture_default_str();
  add_seed(orc, orc_seed);
  add_out(orc, orc_out, "samples CSV");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run the generate/spread/estimate pipeline over many trials");
  FamilyFlags exp_family;
  exp_family.add_to(exp, false);
  std::string exp_config, exp_dist = "exp:1", exp_stop = "count:400", exp_out, exp_plot, exp_cond_out;
  std::uint64_t exp_trials = 1000, exp_seed = 0;
  std::uint32_t exp_kmax = 20;
  unsigned exp_workers = 0;
  std::vector<double> exp_times, exp_cvals{1.1, 1.5, 2.0};
  auto* cfg_opt = exp->add_option("--config", exp_config, "JSON experiment config (path)");
  exp->get_option("--family")->excludes(cfg_opt);
  auto* exp_dist_opt =
      exp->add_option("--dist", exp_dist, "edge spreading time, same grammar as simulate --dist (time)")
          ->capture_default_str();
  auto* exp_stop_opt =
      exp->add_option("--stop", exp_stop, "observation rule: time:T (time) or count:N (infected nodes)")
          ->capture_default_str();
  auto* exp_trials_opt = exp->add_option("--trials", exp_trials, "accepted trials (count)")->capture_default_str();
  auto* exp_kmax_opt = exp->add_option("--kmax", exp_kmax, "histogram cutoff k; larger k go to the overflow row (count)")
      ->capture_default_str();
  exp->add_option("--workers", exp_workers, "worker threads, 0 = available parallelism (threads)")
      ->capture_default_str();
  auto* exp_seed_opt = add_seed(exp, exp_seed);
  add_out(exp, exp_out, "histogram CSV k,count,proportion,ci_lo,ci_hi,theory");
  exp->add_option("--plot-out", exp_plot, "whitespace-separated plot data (path)");
  exp->add_option("--times", exp_times,
                  "geometric only: observation times; writes a detection-vs-time CSV instead (time)")
      ->delimiter(',');
  exp->add_option("--conditional-out", exp_cond_out,
                  "galton_watson only: conditional C^k table c,k,conditioned,hits,... (path)");
  exp->add_option("--c-values", exp_cvals, "galton_watson only: conditioning constants c > 1")
      ->delimiter(',')
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      const Graph g = ex::sample_graph(gen_family.build(), gen_radius, gen_seed);
      emit(gen_out, out, [&](std::ostream& o) { write_edge_list(o, g); });
    } else if (*sim) {
      const auto dist = SpreadingTimeSpec::parse(sim_dist);
      const auto stop = StopRule::parse(sim_stop);
      InfectionHistory h;
      if (!sim_graph.empty()) {
        const Graph g = read_edge_list_file(sim_graph);
        h = simulate_si(g, sim_source, dist, stop, derive_seed(sim_seed, Stream::Spread));
      } else {
        if (sim_family.name.empty()) {
          err << "simulate: one of --family or --graph is required\n";
          return 1;
        }
        h = ex::simulate_family(sim_family.build(), dist, stop, sim_seed);
      }
      emit(sim_out, out, [&](std::ostream& o) { o << history_to_json(h) << '\n'; });
    } else if (*est) {
      const Graph g = read_edge_list_file(est_graph);
      const auto e = estimate_source(g, est_seed);
      std::vector<std::size_t> rank(g.node_count());
      for (std::size_t i = 0; i < e.report.ranking.size(); ++i) rank[e.report.ranking[i]] = i + 1;
      std::vector<bool> center(g.node_count(), false);
      for (NodeId v : e.report.centers) center[v] = true;
      emit(est_out, out, [&](std::ostream& o) {
        o << "node,log_centrality,rank,is_center\n";
        for (NodeId v = 0; v < g.node_count(); ++v) {
          o << v << ',' << num(e.report.log_centrality[v]) << ',' << rank[v] << ',' << (center[v] ? 1 : 0)
            << '\n';
        }
      });
    } else if (*th) {
      std::vector<theory::TheoryCurve> curves;
      for (auto d : th_d) curves.push_back(theory::theory_curve(d, th_kmax));
      emit(th_out, out, [&](std::ostream& o) {
        o << "d,k,ck_limit,ck_upper_bound\n";
        for (const auto& curve : curves) {
          for (std::size_t i = 0; i < curve.values.size(); ++i) {
            o << curve.d << ',' << i + 1 << ',' << num(curve.values[i].value) << ','
              << num(theory::ck_upper_bound(i + 1)) << '\n';
          }
        }
      });
      if (!th_alpha_out.empty()) {
        emit(th_alpha_out, out, [&](std::ostream& o) {
          o << "d,alpha_d\n";
          for (auto d : th_d) o << d << ',' << num(theory::alpha_d(d)) << '\n';
        });
      }
    } else if (*orc) {
      if (orc_name == "polya") {
        if (orc_type1 < 1 || orc_type2 < 1 || orc_add < 1 || orc_steps < 1) {
          fail(ErrorKind::InvalidArgument, "polya needs positive ball counts, add and steps");
        }
        const oracles::UrnState urn{orc_type1, orc_type2, orc_add};
        emit(orc_out, out, [&](std::ostream& o) {
          o << "run,fraction\n";
          for (std::uint64_t r = 0; r < orc_runs; ++r) {
            o << r << ',' << num(oracles::polya_limit_sample(urn, orc_steps, derive_seed(orc_seed, r))) << '\n';
          }
        });
      } else if (orc_name == "branching") {
        const auto law = OffspringSpec::parse(orc_offspring);
        const auto dist = SpreadingTimeSpec::parse(orc_dist);
        if (orc_times.empty()) orc_times.push_back(orc_horizon);
        emit(orc_out, out, [&](std::ostream& o) {
          o << "run,time,population,truncated\n";
          for (std::uint64_t r = 0; r < orc_runs; ++r) {
            const auto tr = oracles::simulate_branching(law, dist, orc_horizon, orc_times,
                                                        derive_seed(orc_seed, r), orc_cap);
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
              o << r << ',' << num(tr.times[i]) << ',' << tr.population[i] << ',' << (tr.truncated ? 1 : 0)
                << '\n';
            }
          }
        });
      } else {
        const auto dist = SpreadingTimeSpec::parse(orc_dist);
        emit(orc_out, out, [&](std::ostream& o) {
          o << "run,count\n";
          for (std::uint64_t r = 0; r < orc_runs; ++r) {
            o << r << ',' << oracles::simulate_renewal(dist, orc_t, derive_seed(orc_seed, r)) << '\n';
          }
        });
      }
    } else if (*exp) {
      ex::ExperimentConfig cfg;
      if (!exp_config.empty()) {
        // Flags given explicitly override the file; family flags do not.
        cfg = load_experiment_config(exp_config);
        if (exp_seed_opt->count() > 0) cfg.master_seed = exp_seed;
        if (exp_dist_opt->count() > 0) cfg.dist = SpreadingTimeSpec::parse(exp_dist);
        if (exp_stop_opt->count() > 0) cfg.stop = StopRule::parse(exp_stop);
        if (exp_trials_opt->count() > 0) cfg.trials = exp_trials;
        if (exp_kmax_opt->count() > 0) cfg.k_max = exp_kmax;
      } else {
        if (exp_family.name.empty()) {
          err << "experiment: one of --family or --config is required\n";
          return 1;
        }
        cfg.family = exp_family.build();
        cfg.dist = SpreadingTimeSpec::parse(exp_dist);
        cfg.stop = StopRule::parse(exp_stop);
        cfg.trials = exp_trials;
        cfg.k_max = exp_kmax;
        cfg.master_seed = exp_seed;
      }
      cfg.workers = exp_workers;

      if (!exp_times.empty()) {
        if (cfg.family.kind != ex::Family::Kind::Geometric) {
          fail(ErrorKind::InvalidArgument, "--times applies to the geometric family only");
        }
        const auto det = ex::geometric_detection(cfg.family.geometric, cfg.dist, exp_times, cfg.trials,
                                                 cfg.master_seed, cfg.workers);
        emit(exp_out, out, [&](std::ostream& o) { ex::write_detection_csv(o, det); });
        return 0;
      }
      ex::ExperimentResult result;
      if (!exp_cond_out.empty()) {
        if (cfg.family.kind != ex::Family::Kind::GaltonWatson) {
          fail(ErrorKind::InvalidArgument, "--conditional-out applies to the galton_watson family only");
        }
        auto det = ex::random_tree_detection(cfg.family.root_law, cfg.family.law, cfg.dist, cfg.stop,
                                             cfg.trials, cfg.master_seed, cfg.k_max, exp_cvals, cfg.workers);
        emit(exp_cond_out, out, [&](std::ostream& o) { ex::write_conditional_csv(o, det); });
        result = std::move(det.result);
      } else {
        result = ex::run_experiment(cfg);
      }
      emit(exp_out, out, [&](std::ostream& o) { ex::write_histogram_csv(o, result); });
      if (!exp_plot.empty()) emit(exp_plot, out, [&](std::ostream& o) { ex::write_plot_data(o, result); });
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace rumor::cli
