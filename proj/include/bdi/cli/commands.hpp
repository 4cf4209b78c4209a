#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bdi/analytic.hpp"
#include "bdi/cli/config.hpp"
#include "bdi/cli/csv.hpp"
#include "bdi/pgf.hpp"
#include "bdi/validation.hpp"

namespace bdi::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> runs;
  std::optional<std::filesystem::path> out;
  std::vector<double> times;
  std::optional<std::int64_t> kmax;
};

// Config with command-line overrides applied. Throws ConfigError.
ExperimentConfig apply_overrides(ExperimentConfig config, const CommandOptions& opt);

IntegralTables build_tables(const ExperimentConfig& config);
// 0, report_step, 2 report_step, ... and the horizon.
std::vector<double> report_times(const ExperimentConfig& config);

// Analytic law of I(t): a closed form when one exists (NBD for proportional
// immigration with I0 = 0, the BD law without immigration), otherwise DFT
// inversion of the PGF with kmax doubled until no aliasing is detected.
PmfVector analytic_pmf(const IntegralTables& tables, double t,
                       std::optional<std::int64_t> kmax = std::nullopt);
// Mean and variance of I(t), closed form when available.
MomentReport analytic_moments(const IntegralTables& tables, double t);
// Pr[I(t) = 0].
double analytic_p0(const IntegralTables& tables, double t);

CsvTable tables_csv(const ExperimentConfig& config, const IntegralTables& tables);
CsvTable moments_csv(const ExperimentConfig& config, const IntegralTables& tables);
CsvTable pmf_csv(const PmfVector& pmf);
// P_k(t) for the listed k over the report times.
CsvTable pmf_cross_section_csv(const ExperimentConfig& config, const IntegralTables& tables,
                               const std::vector<std::int64_t>& ks);

struct ValidationOutcome {
  std::vector<MomentCheck> moments;
  std::vector<GofReport> gof;
  // Extinct fraction by the horizon (processes without immigration only).
  bool has_extinction = false;
  double extinct_fraction = 0.0;
  double extinct_expected = 0.0;
  double extinct_se = 0.0;
  bool extinction_ok = true;
  std::int64_t truncated = 0;
  bool passed() const;
};
ValidationOutcome run_validation(const ExperimentConfig& config, const IntegralTables& tables);

// Each command writes into config.output_dir and returns an exit status.
int cmd_tables(const ExperimentConfig& config, std::ostream& log);
int cmd_moments(const ExperimentConfig& config, std::ostream& log);
int cmd_pmf(const ExperimentConfig& config, const std::vector<double>& times,
            std::optional<std::int64_t> kmax, std::ostream& log);
int cmd_simulate(const ExperimentConfig& config, std::ostream& log);
int cmd_validate(const ExperimentConfig& config, std::ostream& log);
int cmd_plot(const ExperimentConfig& config, std::ostream& log);

// Entry point for the bdi-lab executable.
int run_cli(int argc, char** argv);

}  // namespace bdi::cli
