#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "bdi/rate_model.hpp"

namespace bdi {

struct SimConfig {
  ModelParams params;
  std::uint64_t master_seed = 1;
  std::int64_t n_runs = 1;
  std::vector<double> checkpoints;
  std::int64_t max_events = 5'000'000;
  // Stop a run once I reaches this level. The remaining path is unknown but
  // the run is certainly not extinct in any practical sense.
  std::optional<std::int64_t> population_cap;
  bool record_events = true;
  bool record_daily = false;
  // 0 means one worker per hardware thread.
  unsigned threads = 0;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

enum class EventKind : std::uint8_t { arrival, birth, recovery, death };
std::string_view to_string(EventKind k);

struct Event {
  double t;
  EventKind kind;
  std::int64_t I;  // state just after the event
};

enum class RunStatus : std::uint8_t {
  completed,  // reached the horizon
  extinct,    // hit 0 with no immigration
  capped,     // reached population_cap
  truncated,  // reached max_events
};
std::string_view to_string(RunStatus s);

// Day d covers [d, d+1). i_end[d] is I at time d+1, or -1 when the run
// stopped early (capped or truncated) before then.
struct DailySeries {
  std::vector<std::int64_t> i_new;
  std::vector<std::int64_t> r_new;
  std::vector<std::int64_t> i_end;
};

struct Trajectory {
  std::int64_t run_index = 0;
  std::int64_t initial = 0;
  double horizon = 0.0;
  std::vector<Event> events;  // empty unless record_events
  RunStatus status = RunStatus::completed;
  double end_time = 0.0;
  double extinction_time = -1.0;  // -1 unless extinct
  std::int64_t final_state = 0;
  std::int64_t arrivals = 0;
  std::int64_t births = 0;
  std::int64_t removals = 0;  // recoveries and deaths
  std::int64_t deaths = 0;
  // I at each configured checkpoint; -1 when the run stopped before it.
  std::vector<std::int64_t> checkpoint_states;
  DailySeries daily;  // filled when record_daily
};

// Per-run random stream derived from (master_seed, run_index) only.
class RunRng {
 public:
  RunRng(std::uint64_t master_seed, std::int64_t run_index);
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

Trajectory simulate_path(const SimConfig& config, std::int64_t run_index);

struct RunSummary {
  RunStatus status = RunStatus::completed;
  double end_time = 0.0;
  double extinction_time = -1.0;
  std::int64_t final_state = 0;
  std::int64_t arrivals = 0;
  std::int64_t births = 0;
  std::int64_t removals = 0;
  std::int64_t deaths = 0;
};

struct EnsembleSummary {
  std::vector<double> checkpoints;
  // states[c][run]: I at checkpoint c; -1 when unknown.
  std::vector<std::vector<std::int64_t>> states;
  std::vector<RunSummary> runs;
  std::vector<DailySeries> daily;  // per run, when record_daily
  std::int64_t extinct = 0;
  std::int64_t capped = 0;
  std::int64_t truncated = 0;
};

// Runs are independent of scheduling: run i always uses RunRng(seed, i) and
// lands in slot i.
EnsembleSummary simulate_ensemble(const SimConfig& config);

DailySeries daily_counters(const Trajectory& trajectory);

}  // namespace bdi
