#include "rumor/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rumor/error.hpp"

namespace rumor {

using nlohmann::json;
using experiments::ExperimentConfig;
using experiments::Family;

namespace {

template <class T>
T get(const json& obj, const char* key) {
  if (!obj.contains(key)) fail(ErrorKind::Parse, std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::Parse, std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? get<T>(obj, key) : fallback;
}

}  // namespace

Family family_from_json(const std::string& name, const json& p) {
  if (!p.is_object()) fail(ErrorKind::Parse, "family_params must be an object");
  if (name == "regular_tree" || name == "regular") return Family::regular_tree(get<std::uint32_t>(p, "d"));
  if (name == "galton_watson" || name == "gw") {
    return Family::galton_watson(OffspringSpec::parse(get<std::string>(p, "d0")),
                                 OffspringSpec::parse(get<std::string>(p, "d")));
  }
  if (name == "geometric") {
    GeometricTreeSpec s;
    s.alpha = get<double>(p, "alpha");
    s.b = get<double>(p, "b");
    s.c = get<double>(p, "c");
    s.root_degree = get<std::uint32_t>(p, "root_degree");
    s.depth = get<std::uint32_t>(p, "depth");
    s.core_depth = get_or<std::uint32_t>(p, "core_depth", 1);
    return Family::geometric_tree(s);
  }
  if (name == "erdos_renyi" || name == "er") return Family::erdos_renyi(get<std::size_t>(p, "m"), get<double>(p, "c"));
  if (name == "random_regular") {
    return Family::random_regular(get<std::size_t>(p, "m"), get<std::uint32_t>(p, "d"));
  }
  fail(ErrorKind::Parse, "unknown family '" + name + "'");
}

namespace {

json family_params(const Family& f) {
  switch (f.kind) {
    case Family::Kind::RegularTree: return {{"d", f.d}};
    case Family::Kind::GaltonWatson: return {{"d0", f.root_law.to_string()}, {"d", f.law.to_string()}};
    case Family::Kind::Geometric:
      return {{"alpha", f.geometric.alpha}, {"b", f.geometric.b}, {"c", f.geometric.c},
              {"root_degree", f.geometric.root_degree}, {"depth", f.geometric.depth},
              {"core_depth", f.geometric.core_depth}};
    case Family::Kind::ErdosRenyi: return {{"m", f.m}, {"c", f.c}};
    case Family::Kind::RandomRegular: return {{"m", f.m}, {"d", f.d}};
  }
  return json::object();
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Parse, "config must be a JSON object");
  static const char* known[] = {"family", "family_params", "dist", "stop", "trials", "master_seed", "k_max"};
  for (const auto& item : doc.items()) {
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
      fail(ErrorKind::Parse, "unknown config field '" + item.key() + "'");
    }
  }
  ExperimentConfig cfg;
  cfg.family = family_from_json(get<std::string>(doc, "family"), get_or<json>(doc, "family_params", json::object()));
  if (doc.contains("dist")) cfg.dist = SpreadingTimeSpec::parse(get<std::string>(doc, "dist"));
  if (doc.contains("stop")) cfg.stop = StopRule::parse(get<std::string>(doc, "stop"));
  cfg.trials = get_or<std::uint64_t>(doc, "trials", cfg.trials);
  cfg.master_seed = get_or<std::uint64_t>(doc, "master_seed", cfg.master_seed);
  cfg.k_max = get_or<std::uint32_t>(doc, "k_max", cfg.k_max);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["family"] = cfg.family.name();
  doc["family_params"] = family_params(cfg.family);
  doc["dist"] = cfg.dist.to_string();
  doc["stop"] = cfg.stop.to_string();
  doc["trials"] = cfg.trials;
  doc["master_seed"] = cfg.master_seed;
  doc["k_max"] = cfg.k_max;
  return doc.dump(2);
}

}  // namespace rumor
