#include "bdi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/tools/minima.hpp>

#include "bdi/quadrature.hpp"

namespace bdi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const QuadratureOptions kOpt{1e-13, 1e-10, 20000};

std::vector<double> breaks(const IntegralTables& tables, double a, double b) {
  return breakpoints_between(a, b, tables.params().knots());
}

void require_bd(const IntegralTables& tables) {
  if (!tables.params().immigration_free()) {
    throw std::invalid_argument("requires a process without immigration");
  }
}

void require_proportional(const IntegralTables& tables) {
  if (!tables.params().proportional()) {
    throw std::invalid_argument("requires proportional immigration");
  }
}

// Settled rates after the horizon; false if some schedule still varies.
struct Settled {
  bool ok = false;
  double lambda = 0.0;
  double mu = 0.0;
};

Settled settled(const IntegralTables& tables) {
  const ModelParams& p = tables.params();
  if (!p.settled_by_horizon()) return {};
  return {true, p.lambda.settle_value(), p.mu.settle_value()};
}

}  // namespace

TableRow row_at(const IntegralTables& tables, double t) {
  if (t <= tables.horizon()) return tables.at(t);
  return tables.at_extended(t);
}

double mean_bd(const IntegralTables& tables, double t, std::int64_t initial) {
  if (initial < 0) throw std::invalid_argument("initial count must be >= 0");
  return static_cast<double>(initial) * std::exp(row_at(tables, t).s);
}

double mean_bdi0(const IntegralTables& tables, double t) {
  const TableRow r = row_at(tables, t);
  return std::exp(r.s) * r.N;
}

double mean_bdi(const IntegralTables& tables, double t) {
  const TableRow r = row_at(tables, t);
  return std::exp(r.s) * (static_cast<double>(tables.params().initial_infected) + r.N);
}

MomentReport moments_bdi0(const IntegralTables& tables, double t, double r) {
  require_proportional(tables);
  const TableRow row = row_at(tables, t);
  MomentReport m;
  m.t = t;
  m.mean = std::exp(row.s) * row.N;
  const double q = r * row.L * (1.0 + row.M);
  m.variance = q * std::exp(2.0 * row.s);
  if (m.mean > 0.0) {
    m.cv = std::sqrt(q) / row.N;
  } else {
    m.cv = kInf;
    m.cv_infinite = true;
  }
  return m;
}

MomentReport moments_bdi(const IntegralTables& tables, double t) {
  const ModelParams& p = tables.params();
  const TableRow row = tables.at(t);
  const double i0 = static_cast<double>(p.initial_infected);
  const double e2s = std::exp(2.0 * row.s);
  MomentReport m;
  m.t = t;
  m.mean = std::exp(row.s) * (i0 + row.N);
  m.variance = i0 * e2s * (row.L + row.M);
  const RateSchedule nu = p.immigration();
  if (!nu.is_zero() && t > 0.0) {
    // Second moment of the descendants at t of one arrival at u.
    auto integrand = [&](double u) {
      const TableRow ru = tables.at(u);
      const double g = std::exp(ru.s) * ((row.L - ru.L) + (row.M - ru.M));
      return nu.eval(u) * std::exp(2.0 * (row.s - ru.s)) * (g + 1.0);
    };
    const auto bp = breaks(tables, 0.0, t);
    m.variance += integrate_or_throw(integrand, bp, kOpt);
  }
  if (m.mean > 0.0) {
    m.cv = std::sqrt(m.variance) / m.mean;
  } else {
    m.cv = kInf;
    m.cv_infinite = true;
  }
  return m;
}

double cv_bd(const IntegralTables& tables, double t, std::int64_t initial) {
  if (initial < 1) throw std::invalid_argument("cv_bd: I0 must be >= 1");
  const TableRow r = row_at(tables, t);
  return std::sqrt(r.L + r.M) / std::sqrt(static_cast<double>(initial));
}

P0Forms p0_bdi(const IntegralTables& tables, double t, double r) {
  require_proportional(tables);
  const TableRow row = row_at(tables, t);
  P0Forms out;
  out.value = std::exp(r * std::log1p(-row.beta()));
  out.alternative = std::exp(r * (std::log1p(-row.alpha()) - row.s));
  return out;
}

double extinction_cdf(const IntegralTables& tables, double t, std::int64_t initial) {
  require_bd(tables);
  if (initial < 1) throw std::invalid_argument("extinction_cdf: I0 must be >= 1");
  const TableRow r = row_at(tables, t);
  return std::pow(r.alpha(), static_cast<double>(initial));
}

ExtinctionLimit extinction_limit(const IntegralTables& tables, std::int64_t initial) {
  require_bd(tables);
  if (initial < 1) throw std::invalid_argument("extinction_limit: I0 must be >= 1");
  const TableRow h = tables.at(tables.horizon());
  const double n = static_cast<double>(initial);
  const Settled st = settled(tables);
  if (!st.ok) return {std::pow(h.alpha(), n), false};
  const double a = st.lambda - st.mu;
  if (st.mu == 0.0) return {std::pow(h.alpha(), n), true};  // M stops growing
  if (a <= 0.0) return {1.0, true};                          // M diverges
  const double m_inf = h.M + st.mu * std::exp(-h.s) / a;
  return {std::pow(m_inf / (1.0 + m_inf), n), true};
}

double expected_extinction_time(const IntegralTables& tables) {
  require_bd(tables);
  if (tables.params().initial_infected != 1) {
    throw std::invalid_argument("expected_extinction_time: defined for I0 = 1");
  }
  const ExtinctionLimit lim = extinction_limit(tables, 1);
  if (!lim.exact) throw std::domain_error("expected_extinction_time: rates not settled by horizon");
  if (lim.probability < 1.0) return kInf;
  const Settled st = settled(tables);
  const double b = st.mu - st.lambda;
  if (b <= 0.0) return kInf;  // critical: 1/(1+M) decays only like 1/t

  const double h = tables.horizon();
  auto integrand = [&](double u) { return 1.0 / (1.0 + tables.value(Column::M, u)); };
  const auto bp = breaks(tables, 0.0, h);
  const double head = integrate_or_throw(integrand, bp, kOpt);

  // Past the horizon 1 + M = C + D e^{b tau}.
  const TableRow r = tables.at(h);
  const double d = st.mu * std::exp(-r.s) / b;
  const double c = 1.0 + r.M - d;
  const double tail = std::abs(c / d) < 1e-12 ? 1.0 / (b * d) : std::log1p(c / d) / (b * c);
  return head + tail;
}

ExtinctionReport extinction_report(const IntegralTables& tables, std::span<const double> t_grid,
                                   std::int64_t initial) {
  ExtinctionReport rep;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  for (double t : t_grid) rep.cdf.push_back(extinction_cdf(tables, t, initial));
  const ExtinctionLimit lim = extinction_limit(tables, initial);
  rep.p_finite = lim.probability;
  rep.p_finite_exact = lim.exact;
  if (initial == 1 && tables.params().initial_infected == 1 && lim.exact) {
    rep.expected_T = expected_extinction_time(tables);
  } else {
    rep.expected_T = lim.probability < 1.0 ? kInf : std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

double id_queue_mean(const IntegralTables& tables, double t) {
  const ModelParams& p = tables.params();
  if (!p.lambda.is_zero()) throw std::invalid_argument("id_queue_mean: requires lambda == 0");
  if (t == 0.0) return 0.0;
  const RateSchedule nu = p.immigration();
  const double mu_t = p.mu.integral(0.0, t);
  auto integrand = [&](double u) { return nu.eval(u) * std::exp(p.mu.integral(0.0, u) - mu_t); };
  const auto bp = breakpoints_between(0.0, t, p.knots());
  return integrate_or_throw(integrand, bp, kOpt);
}

PmfVector pmf_pure_death(const IntegralTables& tables, double t, std::int64_t initial) {
  const ModelParams& p = tables.params();
  if (!p.lambda.is_zero() || !p.immigration_free()) {
    throw std::invalid_argument("pmf_pure_death: requires lambda == 0 and nu == 0");
  }
  if (initial < 0) throw std::invalid_argument("initial count must be >= 0");
  PmfVector out;
  out.t = t;
  out.p.assign(static_cast<std::size_t>(initial) + 1, 0.0);
  const double gamma = std::exp(-p.mu.integral(0.0, t));
  if (initial == 0 || gamma == 1.0) {
    out.p.back() = 1.0;
    return out;
  }
  const boost::math::binomial_distribution<double> dist(static_cast<double>(initial), gamma);
  for (std::int64_t k = 0; k <= initial; ++k) {
    out.p[static_cast<std::size_t>(k)] = boost::math::pdf(dist, static_cast<double>(k));
  }
  return out;
}

std::vector<CumulativeMeans> cumulative_means_path(const IntegralTables& tables,
                                                   std::span<const double> times) {
  const ModelParams& p = tables.params();
  const RateSchedule nu = p.immigration();
  auto lam_i = [&](double u) { return p.lambda.eval(u) * mean_bdi(tables, u); };
  auto mu_i = [&](double u) { return p.mu.eval(u) * mean_bdi(tables, u); };
  std::vector<CumulativeMeans> out;
  out.reserve(times.size());
  CumulativeMeans acc;
  double prev = 0.0;
  for (double t : times) {
    if (t < prev) throw std::invalid_argument("cumulative_means_path: times must increase");
    if (t > tables.horizon()) throw std::out_of_range("cumulative_means_path: beyond horizon");
    if (t > prev) {
      const auto bp = breaks(tables, prev, t);
      acc.arrivals += nu.integral(prev, t);
      acc.births += integrate_or_throw(lam_i, bp, kOpt);
      acc.recoveries += integrate_or_throw(mu_i, bp, kOpt);
    }
    acc.t = t;
    out.push_back(acc);
    prev = t;
  }
  return out;
}

CumulativeMeans cumulative_means(const IntegralTables& tables, double t) {
  const double ts[] = {t};
  return cumulative_means_path(tables, ts).front();
}

DailyExpected daily_expected(const IntegralTables& tables, std::int64_t day) {
  if (day < 0) throw std::invalid_argument("daily_expected: day must be >= 0");
  const double a = static_cast<double>(day);
  const double ts[] = {a, a + 1.0};
  const auto c = cumulative_means_path(tables, ts);
  DailyExpected out;
  out.day = day;
  out.new_infected = (c[1].arrivals - c[0].arrivals) + (c[1].births - c[0].births);
  out.new_recovered = c[1].recoveries - c[0].recoveries;
  return out;
}

std::pair<double, double> mean_peak(const IntegralTables& tables) {
  const auto grid = tables.grid();
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = mean_bdi(tables, grid[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  if (hi <= lo) return {grid[best], best_v};
  const auto [t, neg] = boost::math::tools::brent_find_minima(
      [&](double u) { return -mean_bdi(tables, u); }, lo, hi, 52);
  if (-neg < best_v) return {grid[best], best_v};
  return {t, -neg};
}

}  // namespace bdi
