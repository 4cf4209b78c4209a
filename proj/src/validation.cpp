#include "bdi/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace bdi {

PmfVector empirical_pmf(std::span<const std::int64_t> samples, std::int64_t kmax) {
  if (kmax < 0) throw std::invalid_argument("empirical_pmf: kmax must be >= 0");
  PmfVector out;
  out.p.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  double n = 0.0, over = 0.0;
  for (std::int64_t v : samples) {
    if (v < 0) continue;
    ++n;
    if (v > kmax) {
      ++over;
    } else {
      ++out.p[static_cast<std::size_t>(v)];
    }
  }
  if (n == 0.0) throw std::invalid_argument("empirical_pmf: no known samples");
  for (double& x : out.p) x /= n;
  out.tail_mass = over / n;
  return out;
}

PmfVector empirical_pmf(const EnsembleSummary& summary, std::size_t c, std::int64_t kmax) {
  if (c >= summary.states.size()) throw std::out_of_range("empirical_pmf: no such checkpoint");
  PmfVector out = empirical_pmf(summary.states[c], kmax);
  out.t = summary.checkpoints[c];
  return out;
}

GofReport chi_square_gof(std::span<const double> counts, const PmfVector& analytic,
                         double checkpoint) {
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (n < 100.0) throw std::invalid_argument("chi_square_gof: need at least 100 observations");
  const std::size_t kmax = analytic.p.size() - 1;

  // Cells k = 0..kmax, then one pooled tail cell.
  std::vector<GofBin> cells;
  double head_mass = 0.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double obs = k < counts.size() ? counts[k] : 0.0;
    cells.push_back({static_cast<std::int64_t>(k), static_cast<std::int64_t>(k), obs, n * analytic.p[k]});
    head_mass += analytic.p[k];
  }
  double tail_obs = 0.0;
  for (std::size_t k = kmax + 1; k < counts.size(); ++k) tail_obs += counts[k];
  const double tail_p = std::max({analytic.tail_mass, 1.0 - head_mass, 0.0});
  cells.push_back({static_cast<std::int64_t>(kmax) + 1, -1, tail_obs, n * tail_p});

  GofReport rep;
  rep.checkpoint = checkpoint;
  GofBin cur = cells.front();
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cur.expected >= kMinExpected) {
      rep.bins.push_back(cur);
      cur = cells[i];
    } else {
      cur.k_hi = cells[i].k_hi;
      cur.observed += cells[i].observed;
      cur.expected += cells[i].expected;
    }
  }
  if (cur.expected >= kMinExpected || rep.bins.empty()) {
    rep.bins.push_back(cur);
  } else {
    GofBin& last = rep.bins.back();
    last.k_hi = cur.k_hi;
    last.observed += cur.observed;
    last.expected += cur.expected;
  }
  // The final bin always extends to infinity.
  rep.bins.back().k_hi = -1;

  if (rep.bins.size() < 2) {
    rep.applicable = false;
    return rep;
  }
  for (const GofBin& b : rep.bins) {
    const double d = b.observed - b.expected;
    rep.statistic += d * d / b.expected;
  }
  rep.dof = static_cast<int>(rep.bins.size()) - 1;
  rep.p_value = boost::math::gamma_q(rep.dof / 2.0, rep.statistic / 2.0);
  return rep;
}

GofReport chi_square_gof(std::span<const std::int64_t> samples, const PmfVector& analytic,
                         double checkpoint) {
  std::vector<double> counts(analytic.p.size() + 1, 0.0);
  for (std::int64_t v : samples) {
    if (v < 0) continue;
    ++counts[std::min(static_cast<std::size_t>(v), analytic.p.size())];
  }
  return chi_square_gof(counts, analytic, checkpoint);
}

MomentCheck check_moments(std::span<const std::int64_t> samples, double analytic_mean,
                          double analytic_variance, double checkpoint) {
  MomentCheck m;
  m.checkpoint = checkpoint;
  m.analytic_mean = analytic_mean;
  m.analytic_variance = analytic_variance;
  double sum = 0.0;
  for (std::int64_t v : samples) {
    if (v < 0) {
      ++m.unknown;
      continue;
    }
    ++m.n;
    sum += static_cast<double>(v);
  }
  if (m.n < 2) return m;
  const double n = static_cast<double>(m.n);
  m.empirical_mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (std::int64_t v : samples) {
    if (v < 0) continue;
    const double d = static_cast<double>(v) - m.empirical_mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m.empirical_variance = m2 / (n - 1.0);
  m4 /= n;
  m.mean_se = std::sqrt(m.empirical_variance / n);
  const double s4 = m.empirical_variance * m.empirical_variance;
  m.variance_se = std::sqrt(std::max(0.0, (m4 - (n - 3.0) / (n - 1.0) * s4) / n));

  auto within = [](double a, double b, double tol) {
    if (tol == 0.0) return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
    return std::abs(a - b) <= tol;
  };
  m.mean_ok = m.unknown == 0 && within(m.empirical_mean, analytic_mean, 3.0 * m.mean_se);
  m.variance_ok = m.unknown == 0 && within(m.empirical_variance, analytic_variance, 4.0 * m.variance_se);
  return m;
}

std::vector<MomentCheck> validate_moments(const EnsembleSummary& summary,
                                          std::span<const MomentReport> analytic) {
  if (analytic.size() != summary.states.size()) {
    throw std::invalid_argument("validate_moments: one analytic report per checkpoint");
  }
  std::vector<MomentCheck> out;
  for (std::size_t c = 0; c < analytic.size(); ++c) {
    out.push_back(check_moments(summary.states[c], analytic[c].mean, analytic[c].variance,
                                summary.checkpoints[c]));
  }
  return out;
}

}  // namespace bdi
