#pragma once

#include <string>

#include <json.hpp>

#include "rumor/experiments.hpp"

namespace rumor {

/// Experiment config from JSON:
///   {"family": "regular_tree", "family_params": {"d": 3},
///    "dist": "exp:1", "stop": "count:400", "trials": 10000,
///    "master_seed": 0, "k_max": 20}
/// Families and their parameters:
///   regular_tree {d}, galton_watson {d0, d} (offspring strings),
///   geometric {alpha, b, c, root_degree, depth, core_depth},
///   erdos_renyi {m, c}, random_regular {m, d}.
/// "regular", "gw" and "er" are accepted as short family names.
/// Missing optional fields keep their ExperimentConfig defaults. Throws
/// Error(Parse) on malformed input.
experiments::Family family_from_json(const std::string& name, const nlohmann::json& params);

experiments::ExperimentConfig parse_experiment_config(const std::string& json_text);
experiments::ExperimentConfig load_experiment_config(const std::string& path);

std::string experiment_config_to_json(const experiments::ExperimentConfig& cfg);

}  // namespace rumor
