#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bdi/analytic.hpp"
#include "bdi/pgf.hpp"
#include "bdi/simulator.hpp"

namespace bdi {

// Inclusive count range; k_hi == -1 means unbounded.
struct GofBin {
  std::int64_t k_lo = 0;
  std::int64_t k_hi = 0;
  double observed = 0.0;
  double expected = 0.0;
};

struct GofReport {
  double checkpoint = 0.0;
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::vector<GofBin> bins;
  // False when fewer than two bins survive merging.
  bool applicable = true;
};

inline constexpr double kMinExpected = 5.0;
inline constexpr double kSignificance = 0.001;

// Normalized histogram of known states (-1 entries are skipped) at
// checkpoint index c. Mass above kmax goes to tail_mass.
PmfVector empirical_pmf(const EnsembleSummary& summary, std::size_t c, std::int64_t kmax);
PmfVector empirical_pmf(std::span<const std::int64_t> samples, std::int64_t kmax);

// counts[k] observations of state k; indices past analytic.kmax() and the
// analytic tail are pooled. Bins are merged left to right until each
// expected count reaches kMinExpected. Requires at least 100 observations.
GofReport chi_square_gof(std::span<const double> counts, const PmfVector& analytic,
                         double checkpoint = 0.0);
GofReport chi_square_gof(std::span<const std::int64_t> samples, const PmfVector& analytic,
                         double checkpoint = 0.0);

struct MomentCheck {
  double checkpoint = 0.0;
  std::int64_t n = 0;
  std::int64_t unknown = 0;  // runs stopped before the checkpoint
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double analytic_mean = 0.0;
  double analytic_variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
  bool mean_ok = false;
  bool variance_ok = false;
  bool ok() const { return mean_ok && variance_ok; }
};

// Mean within 3 standard errors, variance within 4 standard errors of the
// sample variance (normal approximation with the empirical fourth moment).
// Any unknown sample fails both checks.
MomentCheck check_moments(std::span<const std::int64_t> samples, double analytic_mean,
                          double analytic_variance, double checkpoint = 0.0);
std::vector<MomentCheck> validate_moments(const EnsembleSummary& summary,
                                          std::span<const MomentReport> analytic);

}  // namespace bdi
