#include "bdi/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace bdi {
namespace {

class DailyAccumulator {
 public:
  explicit DailyAccumulator(double horizon)
      : days_(static_cast<std::size_t>(std::ceil(horizon))) {
    out_.i_new.assign(days_, 0);
    out_.r_new.assign(days_, 0);
    out_.i_end.assign(days_, -1);
  }

  // Record day ends up to t with the state held before t.
  void advance(double t, std::int64_t state) {
    while (next_ < days_ && static_cast<double>(next_ + 1) <= t) out_.i_end[next_++] = state;
  }

  void event(double t, EventKind kind, std::int64_t before) {
    advance(t, before);
    if (days_ == 0) return;
    const auto day = std::min(static_cast<std::size_t>(t), days_ - 1);
    if (kind == EventKind::arrival || kind == EventKind::birth) {
      ++out_.i_new[day];
    } else {
      ++out_.r_new[day];
    }
  }

  // known: the state after end_time is known to stay at `state`.
  DailySeries finish(double end_time, std::int64_t state, bool known) {
    advance(end_time, state);
    if (known) {
      while (next_ < days_) out_.i_end[next_++] = state;
    }
    return std::move(out_);
  }

 private:
  std::size_t days_;
  std::size_t next_ = 0;
  DailySeries out_;
};

// Segment ends: schedule knots inside (0, horizon) and the horizon.
std::vector<double> segment_ends(const ModelParams& p) {
  std::vector<double> ends = p.knots();
  ends.push_back(p.horizon);
  return ends;
}

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  if (max_events <= 0) throw std::invalid_argument("max_events must be > 0");
  for (double c : checkpoints) {
    if (!(c >= 0.0 && c <= params.horizon)) {
      throw std::invalid_argument("checkpoints must lie in [0, horizon]");
    }
  }
  if (population_cap && *population_cap < 1) {
    throw std::invalid_argument("population_cap must be >= 1");
  }
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::arrival: return "arrival";
    case EventKind::birth: return "birth";
    case EventKind::recovery: return "recovery";
    case EventKind::death: return "death";
  }
  return "?";
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::extinct: return "extinct";
    case RunStatus::capped: return "capped";
    case RunStatus::truncated: return "truncated";
  }
  return "?";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RunRng::RunRng(std::uint64_t master_seed, std::int64_t run_index) {
  std::uint64_t x = splitmix64(master_seed) ^ splitmix64(static_cast<std::uint64_t>(run_index) + 0x632be59bd9b4e019ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(x >> 32),
                    static_cast<std::uint32_t>(splitmix64(x)),
                    static_cast<std::uint32_t>(splitmix64(x) >> 32)};
  engine_.seed(seq);
}

Trajectory simulate_path(const SimConfig& config, std::int64_t run_index) {
  const ModelParams& p = config.params;
  const RateSchedule nu = p.immigration();
  const bool absorbing = nu.is_zero();
  const double horizon = p.horizon;

  Trajectory tr;
  tr.run_index = run_index;
  tr.initial = p.initial_infected;
  tr.horizon = horizon;

  std::vector<double> cps = config.checkpoints;
  std::vector<std::size_t> order(cps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cps[a] < cps[b]; });
  tr.checkpoint_states.assign(cps.size(), -1);
  std::size_t next_cp = 0;
  // Checkpoints strictly before t see the current state.
  auto flush_before = [&](double t, std::int64_t state) {
    while (next_cp < order.size() && cps[order[next_cp]] < t) tr.checkpoint_states[order[next_cp++]] = state;
  };

  std::optional<DailyAccumulator> daily;
  if (config.record_daily) daily.emplace(horizon);

  RunRng rng(config.master_seed, run_index);
  std::int64_t n = p.initial_infected;
  double t = 0.0;
  std::int64_t n_events = 0;
  const std::int64_t cap = config.population_cap.value_or(INT64_MAX);

  const std::vector<double> ends = segment_ends(p);
  std::size_t seg = 0;
  double seg_start = 0.0;
  double nu_max = 0.0, lm_max = 0.0;
  auto load_segment = [&] {
    nu_max = nu.max_on(seg_start, ends[seg]);
    lm_max = p.lambda.max_on(seg_start, ends[seg]) + p.mu.max_on(seg_start, ends[seg]);
  };
  load_segment();

  RunStatus status = RunStatus::completed;
  if (absorbing && n == 0) {
    status = RunStatus::extinct;
    tr.extinction_time = 0.0;
  } else if (n >= cap) {
    status = RunStatus::capped;
  }

  while (status == RunStatus::completed) {
    const double rate_star = nu_max + lm_max * static_cast<double>(n);
    const double seg_end = ends[seg];
    const double cand = rate_star > 0.0 ? t + rng.exponential(rate_star) : INFINITY;
    if (cand >= seg_end) {
      // No event in this segment; the majorant restarts at its end.
      t = seg_end;
      if (seg + 1 == ends.size()) break;
      seg_start = seg_end;
      ++seg;
      load_segment();
      continue;
    }
    t = cand;
    const double nu_t = nu.eval(t);
    const double lam_t = p.lambda.eval(t) * static_cast<double>(n);
    const double total = nu_t + lam_t + p.mu.eval(t) * static_cast<double>(n);
    const double u = rng.uniform() * rate_star;
    if (u >= total) continue;  // thinned

    flush_before(t, n);
    const std::int64_t before = n;
    EventKind kind;
    if (u < nu_t) {
      kind = EventKind::arrival;
      ++n;
      ++tr.arrivals;
    } else if (u < nu_t + lam_t) {
      kind = EventKind::birth;
      ++n;
      ++tr.births;
    } else {
      --n;
      ++tr.removals;
      if (rng.uniform() < p.fatality_rate) {
        kind = EventKind::death;
        ++tr.deaths;
      } else {
        kind = EventKind::recovery;
      }
    }
    if (daily) daily->event(t, kind, before);
    if (config.record_events) tr.events.push_back({t, kind, n});
    ++n_events;

    if (absorbing && n == 0) {
      status = RunStatus::extinct;
      tr.extinction_time = t;
    } else if (n >= cap) {
      status = RunStatus::capped;
    } else if (n_events >= config.max_events) {
      status = RunStatus::truncated;
    }
  }

  tr.status = status;
  tr.end_time = status == RunStatus::completed ? horizon : t;
  tr.final_state = n;
  const bool known = status == RunStatus::completed || status == RunStatus::extinct;
  if (known) {
    // Remaining checkpoints (including any at the horizon) see the final state.
    while (next_cp < order.size()) tr.checkpoint_states[order[next_cp++]] = n;
  } else {
    flush_before(t, n);
    // A checkpoint exactly at the stopping time sees the state after it.
    while (next_cp < order.size() && cps[order[next_cp]] == t) tr.checkpoint_states[order[next_cp++]] = n;
  }
  if (daily) tr.daily = daily->finish(tr.end_time, n, known);
  return tr;
}

EnsembleSummary simulate_ensemble(const SimConfig& config) {
  config.validate();
  SimConfig run_cfg = config;
  run_cfg.record_events = false;

  const auto n_runs = static_cast<std::size_t>(config.n_runs);
  EnsembleSummary out;
  out.checkpoints = config.checkpoints;
  out.states.assign(config.checkpoints.size(), std::vector<std::int64_t>(n_runs, -1));
  out.runs.resize(n_runs);
  if (config.record_daily) out.daily.resize(n_runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n_runs; i = next++) {
        Trajectory tr = simulate_path(run_cfg, static_cast<std::int64_t>(i));
        for (std::size_t c = 0; c < tr.checkpoint_states.size(); ++c) out.states[c][i] = tr.checkpoint_states[c];
        out.runs[i] = {tr.status, tr.end_time, tr.extinction_time, tr.final_state,
                       tr.arrivals, tr.births, tr.removals, tr.deaths};
        if (config.record_daily) out.daily[i] = std::move(tr.daily);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n_runs;
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_runs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  for (const auto& r : out.runs) {
    out.extinct += r.status == RunStatus::extinct;
    out.capped += r.status == RunStatus::capped;
    out.truncated += r.status == RunStatus::truncated;
  }
  return out;
}

DailySeries daily_counters(const Trajectory& trajectory) {
  DailyAccumulator acc(trajectory.horizon);
  std::int64_t n = trajectory.initial;
  for (const Event& e : trajectory.events) {
    acc.event(e.t, e.kind, n);
    n = e.I;
  }
  const bool known = trajectory.status == RunStatus::completed || trajectory.status == RunStatus::extinct;
  return acc.finish(trajectory.end_time, n, known);
}

}  // namespace bdi
