#include "bdi/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bdi::cli {
namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::set<std::string> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": bad value for '" + key + "'");
  }
}

template <class T>
void get_opt(const json& j, const std::string& key, T& out, const std::string& where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

RateSchedule parse_schedule(const json& j, const std::string& where) {
  if (j.is_number()) return RateSchedule::constant(j.get<double>());
  if (!j.is_object() || !j.contains("type")) throw ConfigError(where + ": expected a number or a schedule object");
  const auto type = get<std::string>(j, "type", where);
  try {
    if (type == "constant") {
      only_keys(j, where, {"type", "value"});
      return RateSchedule::constant(get<double>(j, "value", where));
    }
    if (type == "raised_cosine") {
      only_keys(j, where, {"type", "v0", "v1", "t1", "d"});
      return RateSchedule::raised_cosine(get<double>(j, "v0", where), get<double>(j, "v1", where),
                                         get<double>(j, "t1", where), get<double>(j, "d", where));
    }
    if (type == "piecewise_constant") {
      only_keys(j, where, {"type", "breaks", "values"});
      return RateSchedule::piecewise_constant(get<std::vector<double>>(j, "breaks", where),
                                              get<std::vector<double>>(j, "values", where));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown schedule type '" + type + "'");
}

ImmigrationMode parse_nu(const json& j) {
  const std::string where = "nu";
  if (j.is_object() && j.contains("ratio")) {
    only_keys(j, where, {"ratio"});
    return ProportionalImmigration{get<double>(j, "ratio", where)};
  }
  return parse_schedule(j, where);
}

}  // namespace

SimConfig ExperimentConfig::sim_config() const {
  SimConfig c;
  c.params = params;
  c.master_seed = seed;
  c.n_runs = n_runs;
  c.checkpoints = checkpoints;
  c.max_events = max_events;
  c.population_cap = population_cap;
  c.threads = threads;
  return c;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string where = "config";
  only_keys(j, where,
            {"lambda", "mu", "nu", "initial_infected", "fatality_rate", "horizon", "grid_step",
             "grid_tol", "report_step", "seed", "n_runs", "checkpoints", "max_events",
             "population_cap", "threads", "pmf_times", "kmax", "plot_runs", "output_dir"});
  ExperimentConfig c;
  if (!j.contains("lambda") || !j.contains("mu")) throw ConfigError("config: 'lambda' and 'mu' are required");
  c.params.lambda = parse_schedule(j.at("lambda"), "lambda");
  c.params.mu = parse_schedule(j.at("mu"), "mu");
  if (j.contains("nu")) c.params.nu = parse_nu(j.at("nu"));
  get_opt(j, "initial_infected", c.params.initial_infected, where);
  get_opt(j, "fatality_rate", c.params.fatality_rate, where);
  c.params.horizon = get<double>(j, "horizon", where);
  get_opt(j, "grid_step", c.grid_step, where);
  get_opt(j, "grid_tol", c.grid_tol, where);
  get_opt(j, "report_step", c.report_step, where);
  get_opt(j, "seed", c.seed, where);
  get_opt(j, "n_runs", c.n_runs, where);
  get_opt(j, "checkpoints", c.checkpoints, where);
  get_opt(j, "max_events", c.max_events, where);
  if (j.contains("population_cap") && !j.at("population_cap").is_null()) {
    c.population_cap = get<std::int64_t>(j, "population_cap", where);
  }
  get_opt(j, "threads", c.threads, where);
  get_opt(j, "pmf_times", c.pmf_times, where);
  if (j.contains("kmax") && !j.at("kmax").is_null()) c.kmax = get<std::int64_t>(j, "kmax", where);
  get_opt(j, "plot_runs", c.plot_runs, where);
  if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir", where);

  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(c.grid_step > 0.0) || !(c.grid_tol > 0.0)) throw ConfigError("config: grid_step and grid_tol must be > 0");
  if (!(c.report_step > 0.0)) throw ConfigError("config: report_step must be > 0");
  if (c.n_runs < 1) throw ConfigError("config: n_runs must be >= 1");
  if (c.kmax && *c.kmax < 0) throw ConfigError("config: kmax must be >= 0");
  if (c.plot_runs < 0) throw ConfigError("config: plot_runs must be >= 0");
  for (double t : c.pmf_times) {
    if (!(t >= 0.0 && t <= c.params.horizon)) throw ConfigError("config: pmf_times must lie in [0, horizon]");
  }
  try {
    c.sim_config().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace bdi::cli
