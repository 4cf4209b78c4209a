#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bdi/pgf.hpp"
#include "bdi/rate_model.hpp"

namespace bdi {

// Time used for "t -> infinity" limits, evaluated with the constant-rate
// continuation past the horizon.
inline constexpr double kDefaultTLim = 1000.0;

struct MomentReport {
  double t = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double cv = 0.0;
  // Set when mean == 0; cv is then +inf.
  bool cv_infinite = false;
};

struct ExtinctionLimit {
  double probability = 0.0;
  // False when the rates have not settled by the horizon and probability is
  // only the value reached there (a lower bound).
  bool exact = true;
};

struct ExtinctionReport {
  std::vector<double> t_grid;
  std::vector<double> cdf;
  double p_finite = 0.0;
  bool p_finite_exact = true;
  double expected_T = 0.0;  // +inf when extinction is not certain
};

struct P0Forms {
  double value = 1.0;        // (1 - beta)^r
  double alternative = 1.0;  // (1 - alpha)^r e^{-r s}
};

struct CumulativeMeans {
  double t = 0.0;
  double arrivals = 0.0;    // A_bar = int nu
  double births = 0.0;      // B_bar = int lambda I_bar
  double recoveries = 0.0;  // R_bar = int mu I_bar
};

struct DailyExpected {
  std::int64_t day = 0;
  double new_infected = 0.0;   // over [day, day + 1)
  double new_recovered = 0.0;
};

// Table row at t; beyond the horizon the constant-rate continuation is used.
TableRow row_at(const IntegralTables& tables, double t);

double mean_bd(const IntegralTables& tables, double t, std::int64_t initial);
double mean_bdi0(const IntegralTables& tables, double t);
// e^s (I0 + N): mean of the full process.
double mean_bdi(const IntegralTables& tables, double t);

// Proportional mode, I0 = 0: variance r L (1+M) e^{2s}, cv sqrt(r L (1+M)) / N.
MomentReport moments_bdi0(const IntegralTables& tables, double t, double r);
// Any immigration mode and I0, by quadrature over arrival times.
MomentReport moments_bdi(const IntegralTables& tables, double t);

double cv_bd(const IntegralTables& tables, double t, std::int64_t initial);

P0Forms p0_bdi(const IntegralTables& tables, double t, double r);

// alpha(t)^I0. Requires nu == 0 and I0 >= 1.
double extinction_cdf(const IntegralTables& tables, double t, std::int64_t initial);
ExtinctionLimit extinction_limit(const IntegralTables& tables, std::int64_t initial);
// int_0^inf dt / (1 + M(t)) for I0 = 1; +inf when extinction is not certain
// or the settled process is critical.
double expected_extinction_time(const IntegralTables& tables);
ExtinctionReport extinction_report(const IntegralTables& tables, std::span<const double> t_grid,
                                   std::int64_t initial);

// Immigration-death queue (lambda == 0): gamma(t) int_0^t nu(u) / gamma(u) du.
double id_queue_mean(const IntegralTables& tables, double t);
// Survivors of I0 under pure death: Binomial(I0, gamma(t)).
PmfVector pmf_pure_death(const IntegralTables& tables, double t, std::int64_t initial);

CumulativeMeans cumulative_means(const IntegralTables& tables, double t);
// Same quantities at every time of an increasing sequence, integrating once.
std::vector<CumulativeMeans> cumulative_means_path(const IntegralTables& tables,
                                                   std::span<const double> times);
DailyExpected daily_expected(const IntegralTables& tables, std::int64_t day);

// Maximum of mean_bdi over [0, horizon]: (time, value).
std::pair<double, double> mean_peak(const IntegralTables& tables);

}  // namespace bdi
