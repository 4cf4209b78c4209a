#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdi/rate_model.hpp"
#include "bdi/simulator.hpp"

namespace bdi::cli {

// Bad configuration content; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ModelParams params;
  double grid_step = IntegralTables::kDefaultStep;
  double grid_tol = IntegralTables::kDefaultTol;
  // Spacing of the rows written by `tables` and `moments`.
  double report_step = 1.0;
  std::uint64_t seed = 1;
  std::int64_t n_runs = 14;
  std::vector<double> checkpoints;
  std::int64_t max_events = 5'000'000;
  std::optional<std::int64_t> population_cap;
  unsigned threads = 0;
  std::vector<double> pmf_times;
  std::optional<std::int64_t> kmax;
  // Runs drawn in the `plot` sample-path overlays.
  std::int64_t plot_runs = 7;
  std::filesystem::path output_dir = "out";

  SimConfig sim_config() const;
};

// Throws ConfigError on malformed JSON, unknown keys or invalid values.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace bdi::cli
