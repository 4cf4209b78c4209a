#include "bdi/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdi/cli/svg.hpp"

namespace bdi::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

PmfVector point_mass(double t, std::int64_t at, std::int64_t kmax) {
  PmfVector p;
  p.t = t;
  p.p.assign(static_cast<std::size_t>(std::max(at, kmax)) + 1, 0.0);
  p.p[static_cast<std::size_t>(at)] = 1.0;
  return p;
}

std::string fmt_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

fs::path prepare_out(const ExperimentConfig& c) {
  fs::create_directories(c.output_dir);
  return c.output_dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

ExperimentConfig apply_overrides(ExperimentConfig config, const CommandOptions& opt) {
  if (opt.seed) config.seed = *opt.seed;
  if (opt.runs) {
    if (*opt.runs < 1) throw ConfigError("--runs must be >= 1");
    config.n_runs = *opt.runs;
  }
  if (opt.out) config.output_dir = *opt.out;
  if (opt.kmax) {
    if (*opt.kmax < 0) throw ConfigError("--kmax must be >= 0");
    config.kmax = opt.kmax;
  }
  if (!opt.times.empty()) {
    for (double t : opt.times) {
      if (!(t >= 0.0 && t <= config.params.horizon)) throw ConfigError("--times must lie in [0, horizon]");
    }
    config.pmf_times = opt.times;
  }
  return config;
}

IntegralTables build_tables(const ExperimentConfig& config) {
  return IntegralTables::build(config.params, config.grid_step, config.grid_tol);
}

std::vector<double> report_times(const ExperimentConfig& config) {
  std::vector<double> ts;
  const double h = config.params.horizon;
  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.report_step;
    if (t > h * (1 + 1e-12)) break;
    ts.push_back(std::min(t, h));
  }
  if (ts.back() < h) ts.push_back(h);
  return ts;
}

MomentReport analytic_moments(const IntegralTables& tables, double t) {
  const ModelParams& p = tables.params();
  if (p.proportional() && p.initial_infected == 0) return moments_bdi0(tables, t, p.ratio());
  return moments_bdi(tables, t);
}

double analytic_p0(const IntegralTables& tables, double t) {
  const ModelParams& p = tables.params();
  if (t == 0.0) return p.initial_infected == 0 ? 1.0 : 0.0;
  if (p.proportional()) {
    const TableRow row = row_at(tables, t);
    const double bd = std::pow(row.alpha(), static_cast<double>(p.initial_infected));
    return p.ratio() > 0.0 ? bd * p0_bdi(tables, t, p.ratio()).value : bd;
  }
  return pgf_bdi(0.0, tables, t).real();
}

PmfVector analytic_pmf(const IntegralTables& tables, double t, std::optional<std::int64_t> kmax) {
  const ModelParams& p = tables.params();
  const std::int64_t i0 = p.initial_infected;
  if (t == 0.0) return point_mass(t, i0, kmax.value_or(i0));
  const double beta = tables.at(t).beta();
  if (p.immigration_free()) {
    if (i0 == 0) return point_mass(t, 0, kmax.value_or(0));
    const std::int64_t k = kmax.value_or(i0 + default_kmax_nbd(static_cast<double>(i0), beta));
    return pmf_bd(tables, t, i0, k);
  }
  if (p.proportional() && i0 == 0) {
    const std::int64_t k = kmax.value_or(default_kmax_nbd(p.ratio(), beta));
    PmfVector out = pmf_nbd(p.ratio(), beta, k);
    out.t = t;
    return out;
  }
  // The law decays like beta^k; size the grid as for an NBD with the same
  // mean and beta, or by the moment rule if that is larger.
  const MomentReport m = analytic_moments(tables, t);
  const double shape = beta > 0.0 ? std::max(1.0, m.mean * (1.0 - beta) / beta) : 1.0;
  std::int64_t k = kmax.value_or(
      std::max(default_kmax(m.mean, std::sqrt(m.variance)), default_kmax_nbd(shape, beta, 1e-12)));
  BdiPgf g(tables, t);
  for (;;) {
    try {
      PmfVector out = pmf_from_pgf(std::cref(g), k);
      out.t = t;
      return out;
    } catch (const AliasingError&) {
      if (kmax || k >= (std::int64_t{1} << 26)) throw;
      k = 2 * k;
    }
  }
}

CsvTable tables_csv(const ExperimentConfig& config, const IntegralTables& tables) {
  CsvTable t;
  t.header = {"t", "lambda", "mu", "nu", "s", "L", "M", "N", "Sigma", "alpha", "beta", "gamma"};
  const ModelParams& p = config.params;
  const RateSchedule nu = p.immigration();
  for (double x : report_times(config)) {
    const TableRow r = tables.at(x);
    t.rows.push_back({x, p.lambda.eval(x), p.mu.eval(x), nu.eval(x), r.s, r.L, r.M, r.N, r.Sigma,
                      r.alpha(), r.beta(), r.gamma});
  }
  return t;
}

CsvTable moments_csv(const ExperimentConfig& config, const IntegralTables& tables) {
  CsvTable out;
  out.header = {"t", "mean_bd", "mean_bdi0", "var", "cv", "P0", "A_bar", "B_bar", "R_bar", "I_new", "R_new"};
  const std::vector<double> ts = report_times(config);
  const double h = config.params.horizon;
  // Cumulative means at report times and one day later.
  std::vector<double> all = ts;
  for (double x : ts) {
    if (x + 1.0 <= h) all.push_back(x + 1.0);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const auto cum = cumulative_means_path(tables, all);
  auto at = [&](double x) -> const CumulativeMeans& {
    const auto it = std::lower_bound(all.begin(), all.end(), x);
    return cum[static_cast<std::size_t>(it - all.begin())];
  };
  for (double x : ts) {
    const MomentReport m = analytic_moments(tables, x);
    const CumulativeMeans& c = at(x);
    double i_new = NAN, r_new = NAN;
    if (x + 1.0 <= h) {
      const CumulativeMeans& d = at(x + 1.0);
      i_new = (d.arrivals - c.arrivals) + (d.births - c.births);
      r_new = d.recoveries - c.recoveries;
    }
    out.rows.push_back({x, mean_bd(tables, x, 1), mean_bdi0(tables, x), m.variance, m.cv,
                        analytic_p0(tables, x), c.arrivals, c.births, c.recoveries, i_new, r_new});
  }
  return out;
}

CsvTable pmf_csv(const PmfVector& pmf) {
  CsvTable t;
  t.header = {"k", "p"};
  for (std::size_t k = 0; k < pmf.p.size(); ++k) t.rows.push_back({static_cast<double>(k), pmf.p[k]});
  return t;
}

CsvTable pmf_cross_section_csv(const ExperimentConfig& config, const IntegralTables& tables,
                               const std::vector<std::int64_t>& ks) {
  CsvTable t;
  t.header = {"t"};
  for (auto k : ks) t.header.push_back("P_" + std::to_string(k));
  for (double x : report_times(config)) {
    const PmfVector p = analytic_pmf(tables, x, config.kmax);
    std::vector<double> row{x};
    for (auto k : ks) row.push_back(k <= p.kmax() ? p.p[static_cast<std::size_t>(k)] : 0.0);
    t.rows.push_back(std::move(row));
  }
  return t;
}

bool ValidationOutcome::passed() const {
  if (truncated > 0 || !extinction_ok) return false;
  for (const auto& m : moments) {
    if (!m.ok()) return false;
  }
  for (const auto& g : gof) {
    if (g.applicable && !(g.p_value > kSignificance)) return false;
  }
  return true;
}

ValidationOutcome run_validation(const ExperimentConfig& config, const IntegralTables& tables) {
  SimConfig sim = config.sim_config();
  if (sim.checkpoints.empty()) sim.checkpoints = {std::min(10.0, sim.params.horizon), sim.params.horizon};
  sim.record_events = false;
  const EnsembleSummary ens = simulate_ensemble(sim);

  ValidationOutcome out;
  out.truncated = ens.truncated;
  for (std::size_t c = 0; c < sim.checkpoints.size(); ++c) {
    const double t = sim.checkpoints[c];
    const MomentReport m = analytic_moments(tables, t);
    out.moments.push_back(check_moments(ens.states[c], m.mean, m.variance, t));
    if (t > 0.0 && ens.states[c].size() >= 100) {
      out.gof.push_back(chi_square_gof(ens.states[c], analytic_pmf(tables, t, config.kmax), t));
    }
  }
  const ModelParams& p = sim.params;
  if (p.immigration_free() && p.initial_infected >= 1) {
    out.has_extinction = true;
    const double n = static_cast<double>(ens.runs.size());
    out.extinct_fraction = static_cast<double>(ens.extinct) / n;
    out.extinct_expected = extinction_cdf(tables, p.horizon, p.initial_infected);
    out.extinct_se = std::sqrt(out.extinct_expected * (1 - out.extinct_expected) / n);
    out.extinction_ok = std::abs(out.extinct_fraction - out.extinct_expected) <=
                        std::max(3.0 * out.extinct_se, 1e-12);
  }
  return out;
}

int cmd_tables(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir = prepare_out(config);
  const IntegralTables tables = build_tables(config);
  write_csv(dir / "tables.csv", tables_csv(config, tables));
  log << "wrote " << (dir / "tables.csv").string() << " (identity residual "
      << tables.identity_residual() << ")\n";
  return kExitOk;
}

int cmd_moments(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir = prepare_out(config);
  const IntegralTables tables = build_tables(config);
  write_csv(dir / "moments.csv", moments_csv(config, tables));
  log << "wrote " << (dir / "moments.csv").string() << "\n";
  return kExitOk;
}

int cmd_pmf(const ExperimentConfig& config, const std::vector<double>& times,
            std::optional<std::int64_t> kmax, std::ostream& log) {
  const fs::path dir = prepare_out(config);
  const IntegralTables tables = build_tables(config);
  std::vector<double> ts = times.empty() ? config.pmf_times : times;
  if (ts.empty()) {
    for (double t : {5.0, 10.0, 20.0, 50.0}) {
      if (t <= config.params.horizon) ts.push_back(t);
    }
  }
  const auto k = kmax ? kmax : config.kmax;
  for (double t : ts) {
    const fs::path path = dir / ("pmf_t" + fmt_time(t) + ".csv");
    write_csv(path, pmf_csv(analytic_pmf(tables, t, k)));
    log << "wrote " << path.string() << "\n";
  }
  write_csv(dir / "pmf_cross_sections.csv", pmf_cross_section_csv(config, tables, {0, 1, 2, 5, 10, 20}));
  log << "wrote " << (dir / "pmf_cross_sections.csv").string() << "\n";
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir = prepare_out(config);
  const fs::path runs_dir = dir / "runs";
  fs::create_directories(runs_dir);
  SimConfig sim = config.sim_config();
  sim.record_events = true;
  sim.record_daily = true;

  const auto n = static_cast<std::size_t>(sim.n_runs);
  unsigned threads = sim.threads ? sim.threads : std::max(1u, std::thread::hardware_concurrency());
  json runs = json::array();
  std::vector<std::vector<std::int64_t>> states(sim.checkpoints.size());
  std::int64_t counts[4] = {0, 0, 0, 0};

  // Simulate a batch in parallel, then write it from this thread.
  for (std::size_t start = 0; start < n; start += threads) {
    const std::size_t end = std::min(n, start + threads);
    std::vector<Trajectory> batch(end - start);
    std::vector<std::thread> pool;
    for (std::size_t i = start; i < end; ++i) {
      pool.emplace_back([&, i] { batch[i - start] = simulate_path(sim, static_cast<std::int64_t>(i)); });
    }
    for (auto& th : pool) th.join();

    for (const Trajectory& tr : batch) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%04lld", static_cast<long long>(tr.run_index));
      std::string lines;
      for (const Event& e : tr.events) {
        lines += "{\"t\":" + format_double(e.t) + ",\"kind\":\"" + std::string(to_string(e.kind)) +
                 "\",\"I\":" + std::to_string(e.I) + "}\n";
      }
      write_text(runs_dir / (std::string(name) + ".jsonl"), lines);
      CsvTable daily;
      daily.header = {"day", "I_new", "R_new", "I_end"};
      for (std::size_t d = 0; d < tr.daily.i_new.size(); ++d) {
        daily.rows.push_back({static_cast<double>(d), static_cast<double>(tr.daily.i_new[d]),
                              static_cast<double>(tr.daily.r_new[d]), static_cast<double>(tr.daily.i_end[d])});
      }
      write_csv(runs_dir / (std::string(name) + "_daily.csv"), daily);
      ++counts[static_cast<int>(tr.status)];
      for (std::size_t c = 0; c < states.size(); ++c) states[c].push_back(tr.checkpoint_states[c]);
      runs.push_back({{"run", tr.run_index},
                      {"status", std::string(to_string(tr.status))},
                      {"end_time", tr.end_time},
                      {"extinction_time", tr.extinction_time < 0 ? json(nullptr) : json(tr.extinction_time)},
                      {"final_state", tr.final_state},
                      {"arrivals", tr.arrivals},
                      {"births", tr.births},
                      {"removals", tr.removals},
                      {"deaths", tr.deaths},
                      {"events", tr.events.size()},
                      {"checkpoint_states", tr.checkpoint_states}});
    }
  }

  json cps = json::array();
  for (std::size_t c = 0; c < states.size(); ++c) {
    double m = 0, v = 0;
    std::int64_t k = 0;
    for (auto s : states[c]) {
      if (s < 0) continue;
      ++k;
      const double d = static_cast<double>(s) - m;
      m += d / static_cast<double>(k);
      v += d * (static_cast<double>(s) - m);
    }
    cps.push_back({{"t", sim.checkpoints[c]},
                   {"known", k},
                   {"mean", k > 0 ? json(m) : json(nullptr)},
                   {"variance", k > 1 ? json(v / static_cast<double>(k - 1)) : json(nullptr)}});
  }
  json summary = {{"seed", sim.master_seed},
                  {"n_runs", sim.n_runs},
                  {"horizon", sim.params.horizon},
                  {"status_counts",
                   {{"completed", counts[0]}, {"extinct", counts[1]}, {"capped", counts[2]}, {"truncated", counts[3]}}},
                  {"checkpoints", cps},
                  {"runs", runs}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  log << "simulated " << n << " runs into " << runs_dir.string() << "; summary in "
      << (dir / "summary.json").string() << "\n";
  if (counts[3] > 0) log << "warning: " << counts[3] << " runs hit max_events and were truncated\n";
  return kExitOk;
}

int cmd_validate(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir = prepare_out(config);
  const IntegralTables tables = build_tables(config);
  const ValidationOutcome v = run_validation(config, tables);

  std::string text;
  char buf[256];
  std::snprintf(buf, sizeof buf, "validation: %lld runs, seed %llu\n", static_cast<long long>(config.n_runs),
                static_cast<unsigned long long>(config.seed));
  text += buf;
  json jm = json::array(), jg = json::array();
  for (const auto& m : v.moments) {
    std::snprintf(buf, sizeof buf,
                  "  t=%-8g mean %.6g vs %.6g (se %.3g) %s | var %.6g vs %.6g (se %.3g) %s%s\n", m.checkpoint,
                  m.empirical_mean, m.analytic_mean, m.mean_se, m.mean_ok ? "ok" : "FAIL", m.empirical_variance,
                  m.analytic_variance, m.variance_se, m.variance_ok ? "ok" : "FAIL",
                  m.unknown ? " (runs stopped early)" : "");
    text += buf;
    jm.push_back({{"t", m.checkpoint}, {"n", m.n}, {"unknown", m.unknown},
                  {"empirical_mean", m.empirical_mean}, {"analytic_mean", m.analytic_mean},
                  {"mean_se", m.mean_se}, {"mean_ok", m.mean_ok},
                  {"empirical_variance", m.empirical_variance}, {"analytic_variance", m.analytic_variance},
                  {"variance_se", m.variance_se}, {"variance_ok", m.variance_ok}});
  }
  for (const auto& g : v.gof) {
    if (g.applicable) {
      std::snprintf(buf, sizeof buf, "  t=%-8g chi2 %.4g on %d dof, p = %.4g %s\n", g.checkpoint, g.statistic,
                    g.dof, g.p_value, g.p_value > kSignificance ? "ok" : "FAIL");
    } else {
      std::snprintf(buf, sizeof buf, "  t=%-8g chi2 not applicable (fewer than 2 bins)\n", g.checkpoint);
    }
    text += buf;
    json bins = json::array();
    for (const auto& b : g.bins) {
      bins.push_back({{"k_lo", b.k_lo}, {"k_hi", b.k_hi < 0 ? json(nullptr) : json(b.k_hi)},
                      {"observed", b.observed}, {"expected", b.expected}});
    }
    jg.push_back({{"t", g.checkpoint}, {"applicable", g.applicable}, {"statistic", g.statistic},
                  {"dof", g.dof}, {"p_value", g.p_value}, {"bins", bins}});
  }
  json report = {{"seed", config.seed}, {"n_runs", config.n_runs}, {"truncated_runs", v.truncated},
                 {"moments", jm}, {"gof", jg}, {"passed", v.passed()}};
  if (v.has_extinction) {
    std::snprintf(buf, sizeof buf, "  extinct by horizon %.4f vs %.4f (se %.3g) %s\n", v.extinct_fraction,
                  v.extinct_expected, v.extinct_se, v.extinction_ok ? "ok" : "FAIL");
    text += buf;
    report["extinction"] = {{"fraction", v.extinct_fraction}, {"expected", v.extinct_expected},
                            {"se", v.extinct_se}, {"ok", v.extinction_ok}};
  }
  if (v.truncated) text += "  " + std::to_string(v.truncated) + " runs truncated at max_events: FAIL\n";
  text += v.passed() ? "PASSED\n" : "FAILED\n";
  write_text(dir / "validation.json", report.dump(2) + "\n");
  write_text(dir / "validation.txt", text);
  log << text;
  return v.passed() ? kExitOk : kExitFailure;
}

int cmd_plot(const ExperimentConfig& config, std::ostream& log) {
  const fs::path dir = prepare_out(config);
  const IntegralTables tables = build_tables(config);
  const double h = config.params.horizon;

  std::vector<double> grid;
  const double dt = std::min(config.report_step, 0.25);
  for (std::int64_t k = 0; static_cast<double>(k) * dt <= h; ++k) grid.push_back(static_cast<double>(k) * dt);
  std::vector<double> mean;
  for (double t : grid) mean.push_back(mean_bdi(tables, t));

  SimConfig sim = config.sim_config();
  sim.checkpoints = grid;
  sim.record_events = false;
  sim.record_daily = true;
  std::vector<Trajectory> runs;
  for (std::int64_t i = 0; i < config.plot_runs; ++i) runs.push_back(simulate_path(sim, i));

  std::vector<Series> paths;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    Series s{"run " + std::to_string(i + 1), {}, {}, palette(i)};
    for (std::size_t k = 0; k < grid.size(); ++k) {
      s.x.push_back(grid[k]);
      const auto v = runs[i].checkpoint_states[k];
      s.y.push_back(v < 0 ? NAN : static_cast<double>(v));
    }
    paths.push_back(std::move(s));
  }
  Series mean_s{"analytic mean", grid, mean, "#000000"};
  mean_s.dashed = true;
  paths.push_back(mean_s);

  write_svg(dir / "I_linear.svg", {"Number of infected I(t)", "t [days]", "I(t)"}, paths);
  write_svg(dir / "I_semilog.svg", {"Number of infected I(t), semi-log", "t [days]", "I(t)", true}, paths);

  // Daily new infections: expected values against the first run.
  const auto days = static_cast<std::int64_t>(std::floor(h));
  Series expected{"expected I_new", {}, {}, "#000000"};
  for (std::int64_t d = 0; d < days; ++d) {
    const DailyExpected e = daily_expected(tables, d);
    expected.x.push_back(static_cast<double>(d) + 0.5);
    expected.y.push_back(e.new_infected);
  }
  std::vector<Series> daily{expected};
  if (!runs.empty()) {
    Series bars{"run 1 I_new", {}, {}, palette(0)};
    bars.bars = true;
    for (std::size_t d = 0; d < runs[0].daily.i_new.size(); ++d) {
      bars.x.push_back(static_cast<double>(d) + 0.5);
      bars.y.push_back(static_cast<double>(runs[0].daily.i_new[d]));
    }
    daily.insert(daily.begin(), bars);
  }
  write_svg(dir / "daily_new.svg", {"Daily newly infected", "day", "count"}, daily);

  // alpha, beta and gamma
  std::vector<Series> ab{{"alpha", {}, {}, palette(0)}, {"beta", {}, {}, palette(1)}, {"gamma", {}, {}, palette(2)}};
  for (double t : grid) {
    const TableRow r = tables.at(t);
    for (auto& s : ab) s.x.push_back(t);
    ab[0].y.push_back(r.alpha());
    ab[1].y.push_back(r.beta());
    ab[2].y.push_back(r.gamma);
  }
  write_svg(dir / "alpha_beta.svg", {"alpha(t), beta(t), gamma(t)", "t [days]", ""}, ab);
  log << "wrote I_linear.svg, I_semilog.svg, daily_new.svg, alpha_beta.svg to " << dir.string() << "\n";
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"bdi-lab: birth-death-immigration epidemic models"};
  app.require_subcommand(1);
  std::string config_path;
  CommandOptions opt;
  std::uint64_t seed = 0;
  std::int64_t runs = 0;
  std::string out;
  std::int64_t kmax = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"tables", "cumulative integrals s, L, M, N, Sigma, alpha, beta, gamma"},
      {"moments", "analytic means, variance, cv, P0 and daily expectations"},
      {"pmf", "analytic distribution of I(t)"},
      {"simulate", "sample paths: events, daily counts and a summary"},
      {"validate", "simulated ensemble against the analytic laws"},
      {"plot", "SVG charts"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--runs", runs, "number of runs");
    sub->add_option("--out", out, "output directory");
    if (name == "pmf") {
      sub->add_option("--times", opt.times, "query times")->delimiter(',');
      sub->add_option("--kmax", kmax, "largest count");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--runs")) opt.runs = runs;
  if (sub->count("--out")) opt.out = out;
  if (sub->get_name() == "pmf" && sub->count("--kmax")) opt.kmax = kmax;

  ExperimentConfig config;
  try {
    config = apply_overrides(load_config(config_path), opt);
  } catch (const ConfigError& e) {
    std::cerr << "bdi-lab: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const std::string name = sub->get_name();
    if (name == "tables") return cmd_tables(config, std::cout);
    if (name == "moments") return cmd_moments(config, std::cout);
    if (name == "pmf") return cmd_pmf(config, config.pmf_times, config.kmax, std::cout);
    if (name == "simulate") return cmd_simulate(config, std::cout);
    if (name == "validate") return cmd_validate(config, std::cout);
    return cmd_plot(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "bdi-lab: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace bdi::cli
