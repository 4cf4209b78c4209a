#include "bdi/pgf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "bdi/fft.hpp"

namespace bdi {

double PmfVector::mass() const { return std::accumulate(p.begin(), p.end(), 0.0); }

double PmfVector::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) m += static_cast<double>(k) * p[k];
  return m;
}

double PmfVector::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = static_cast<double>(k) - m;
    v += d * d * p[k];
  }
  return v;
}

namespace {

void check_time(const IntegralTables& tables, double t) {
  if (!(t >= 0.0 && t <= tables.horizon())) {
    throw std::out_of_range("time outside [0, horizon]");
  }
}

void check_disk(Complex z) {
  if (!(std::abs(z) <= 1.0 + 1e-12)) throw std::domain_error("PGF argument must satisfy |z| <= 1");
}

Complex ipow(Complex base, std::int64_t n) {
  Complex out{1.0, 0.0};
  while (n > 0) {
    if (n & 1) out *= base;
    base *= base;
    n >>= 1;
  }
  return out;
}

// G_desc(z, u, t) - 1 without the cancellation of forming 1 + x - 1.
Complex descendant_excess(Complex z, double u, double s_t, double L_t,
                          const IntegralTables& tables) {
  const Complex zm1 = z - 1.0;
  const double s_u = tables.value(Column::s, u);
  const double L_u = tables.value(Column::L, u);
  const double decay = std::exp(-(s_t - s_u));
  const double growth = std::exp(s_u) * (L_t - L_u);
  return 1.0 / (decay / zm1 - growth);
}

std::vector<double> interior_knots(const IntegralTables& tables, double t) {
  const auto knots = tables.params().knots();
  return breakpoints_between(0.0, t, knots);
}

}  // namespace

Complex pgf_bd(Complex z, const IntegralTables& tables, double t, std::int64_t initial) {
  check_disk(z);
  if (initial < 0) throw std::invalid_argument("initial count must be >= 0");
  if (initial == 0) return {1.0, 0.0};
  const TableRow r = tables.at(t);
  const double a = r.alpha();
  const double b = r.beta();
  const Complex den = 1.0 - b * z;
  if (std::abs(den) < 1e-300) throw std::domain_error("pgf_bd: 1 - beta z vanishes");
  // (a + (1 - a - b) z) / den, written so that z = 1 is exact
  return ipow(1.0 + (1.0 - a) * (z - 1.0) / den, initial);
}

Complex pgf_descendants(Complex z, double u, double t, const IntegralTables& tables) {
  if (!(u >= 0.0 && u <= t)) throw std::domain_error("pgf_descendants: need 0 <= u <= t");
  check_time(tables, t);
  if (z == Complex{1.0, 0.0}) return {1.0, 0.0};
  const double s_t = tables.value(Column::s, t);
  const double L_t = tables.value(Column::L, t);
  return 1.0 + descendant_excess(z, u, s_t, L_t, tables);
}

Complex pgf_id_numeric(Complex z, const IntegralTables& tables, double t,
                       const QuadratureOptions& opt) {
  check_disk(z);
  check_time(tables, t);
  const RateSchedule nu = tables.params().immigration();
  if (z == Complex{1.0, 0.0} || t == 0.0 || nu.is_zero()) return {1.0, 0.0};
  const double s_t = tables.value(Column::s, t);
  const double L_t = tables.value(Column::L, t);
  auto integrand = [&](double u) -> Complex {
    return nu.eval(u) * descendant_excess(z, u, s_t, L_t, tables);
  };
  const auto bp = interior_knots(tables, t);
  return std::exp(integrate_or_throw(integrand, bp, opt));
}

Complex pgf_id_direct(Complex z, const IntegralTables& tables, double t,
                      const QuadratureOptions& opt) {
  check_disk(z);
  check_time(tables, t);
  const RateSchedule nu = tables.params().immigration();
  if (z == Complex{1.0, 0.0} || t == 0.0 || nu.is_zero()) return {1.0, 0.0};
  const double s_t = tables.value(Column::s, t);
  const double L_t = tables.value(Column::L, t);
  const Complex zm1 = z - 1.0;
  auto integrand = [&](double u) -> Complex {
    const double s_u = tables.value(Column::s, u);
    const double L_u = tables.value(Column::L, u);
    return nu.eval(u) * std::exp(s_t - s_u) * zm1 / (1.0 - std::exp(s_t) * (L_t - L_u) * zm1);
  };
  const auto bp = interior_knots(tables, t);
  return std::exp(integrate_or_throw(integrand, bp, opt));
}

double initial_ratio(const IntegralTables& tables) {
  const ModelParams& p = tables.params();
  if (p.proportional()) return p.ratio();
  const double lam = p.lambda.eval(0.0);
  if (lam <= 0.0) throw std::domain_error("r(0) undefined: lambda(0) = 0");
  return p.immigration().eval(0.0) / lam;
}

Complex pgf_nbd_factor(Complex z, const IntegralTables& tables, double t, double r0) {
  check_disk(z);
  if (!(r0 > 0.0)) throw std::domain_error("pgf_nbd_factor: r0 must be positive");
  const double b = tables.at(t).beta();
  return std::exp(r0 * (std::log1p(-b) - std::log(1.0 - b * z)));
}

Complex pgf_correction(Complex z, const IntegralTables& tables, double t,
                       const QuadratureOptions& opt) {
  check_disk(z);
  check_time(tables, t);
  const ModelParams& p = tables.params();
  if (p.proportional() || z == Complex{1.0, 0.0} || t == 0.0) return {1.0, 0.0};
  if (p.lambda.min_on(0.0, t) <= 0.0) {
    throw std::domain_error("pgf_correction: lambda vanishes, r(t) undefined");
  }
  const RateSchedule& lam = p.lambda;
  const RateSchedule nu = p.immigration();
  const double s_t = tables.value(Column::s, t);
  const double L_t = tables.value(Column::L, t);
  const double e_st = std::exp(s_t);
  const Complex zm1 = z - 1.0;
  auto log_a = [&](double u) {
    return std::log(1.0 - e_st * (L_t - tables.value(Column::L, u)) * zm1);
  };
  auto integrand = [&](double u) -> Complex {
    const double l = lam.eval(u);
    const double dr = (nu.derivative(u) * l - nu.eval(u) * lam.derivative(u)) / (l * l);
    return dr * log_a(u);
  };
  const auto bp = interior_knots(tables, t);
  Complex acc = integrate_or_throw(integrand, bp, opt);
  for (std::size_t i = 1; i + 1 < bp.size(); ++i) {
    const double u = bp[i];
    const double jump = nu.eval(u) / lam.eval(u) - nu.eval_left(u) / lam.eval_left(u);
    if (jump != 0.0) acc += jump * log_a(u);
  }
  return std::exp(-acc);
}

Complex pgf_bdi(Complex z, const IntegralTables& tables, double t) {
  return pgf_bd(z, tables, t, tables.params().initial_infected) *
         pgf_id_numeric(z, tables, t);
}

ImmigrationPgf::ImmigrationPgf(const IntegralTables& tables, double t,
                               const QuadratureOptions& opt)
    : tables_(&tables), t_(t), opt_(opt) {
  check_time(tables, t);
  const RateSchedule nu = tables.params().immigration();
  if (t == 0.0 || nu.is_zero()) {
    trivial_ = true;
    return;
  }
  const double s_t = tables.value(Column::s, t);
  const double L_t = tables.value(Column::L, t);

  std::vector<Complex> probes{{0.0, 0.0}, {0.5, 0.0}, {-1.0, 0.0}};
  for (int j = 1; j < 64; ++j) probes.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / 64));
  for (double th = 1e-1; th > 1e-8; th *= 0.1) probes.push_back(std::polar(1.0, th));

  auto make_panel = [&](double a, double b) {
    std::vector<Node> panel;
    panel.reserve(15);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    auto push = [&](double u, double wk, double wg) {
      const double s_u = tables.value(Column::s, u);
      const double L_u = tables.value(Column::L, u);
      const double scale = h * nu.eval(u);
      panel.push_back({wk * scale, wg * scale, std::exp(-(s_t - s_u)),
                       std::exp(s_u) * (L_t - L_u)});
    };
    for (std::size_t i = 0; i < 7; ++i) {
      const double wg = i % 2 == 1 ? gk15::kGaussWeights[i / 2] : 0.0;
      push(c - h * gk15::kNodes[i], gk15::kKronrodWeights[i], wg);
      push(c + h * gk15::kNodes[i], gk15::kKronrodWeights[i], wg);
    }
    push(c, gk15::kKronrodWeights[7], gk15::kGaussWeights[3]);
    return panel;
  };
  auto panel_sums = [](const std::vector<Node>& panel, Complex zm1) {
    Complex k{}, g{};
    for (const Node& n : panel) {
      const Complex term = zm1 / (n.decay - n.growth * zm1);
      k += n.kronrod_weight * term;
      g += n.gauss_weight * term;
    }
    return std::pair{k, g};
  };

  struct Piece {
    double a, b;
    std::vector<Node> nodes;
  };
  std::vector<Piece> pieces;
  const auto bp = interior_knots(tables, t);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    pieces.push_back({bp[i], bp[i + 1], make_panel(bp[i], bp[i + 1])});
  }
  for (int round = 0; round < 60; ++round) {
    std::vector<Complex> totals(probes.size());
    std::vector<std::vector<double>> errs(pieces.size(), std::vector<double>(probes.size()));
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (std::size_t j = 0; j < probes.size(); ++j) {
        auto [k, g] = panel_sums(pieces[i].nodes, probes[j] - 1.0);
        totals[j] += k;
        errs[i][j] = std::abs(k - g);
      }
    }
    std::vector<Piece> next;
    bool split = false;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      bool ok = true;
      const double share = (pieces[i].b - pieces[i].a) / t;
      for (std::size_t j = 0; j < probes.size() && ok; ++j) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(totals[j])) * share;
        ok = errs[i][j] <= target;
      }
      const double m = 0.5 * (pieces[i].a + pieces[i].b);
      if (ok || static_cast<int>(pieces.size() + next.size()) >= opt.max_intervals ||
          !(m > pieces[i].a && m < pieces[i].b)) {
        next.push_back(std::move(pieces[i]));
      } else {
        split = true;
        next.push_back({pieces[i].a, m, make_panel(pieces[i].a, m)});
        next.push_back({m, pieces[i].b, make_panel(m, pieces[i].b)});
      }
    }
    pieces = std::move(next);
    if (!split) break;
  }
  panels_ = pieces.size();
  for (auto& p : pieces) nodes_.insert(nodes_.end(), p.nodes.begin(), p.nodes.end());
}

Complex ImmigrationPgf::operator()(Complex z) const {
  check_disk(z);
  if (trivial_ || z == Complex{1.0, 0.0}) return {1.0, 0.0};
  const Complex zm1 = z - 1.0;
  Complex total{};
  double err = 0.0;
  for (std::size_t start = 0; start < nodes_.size(); start += 15) {
    Complex k{}, g{};
    for (std::size_t i = start; i < start + 15; ++i) {
      const Node& n = nodes_[i];
      const Complex term = zm1 / (n.decay - n.growth * zm1);
      k += n.kronrod_weight * term;
      g += n.gauss_weight * term;
    }
    total += k;
    err += std::abs(k - g);
  }
  if (err > std::max(opt_.abs_tol, opt_.rel_tol * std::abs(total))) {
    ++fallbacks_;
    return pgf_id_numeric(z, *tables_, t_, opt_);
  }
  return std::exp(total);
}

BdiPgf::BdiPgf(const IntegralTables& tables, double t, const QuadratureOptions& opt)
    : tables_(&tables),
      t_(t),
      initial_(tables.params().initial_infected),
      immigration_(tables, t, opt) {}

Complex BdiPgf::operator()(Complex z) const {
  return pgf_bd(z, *tables_, t_, initial_) * immigration_(z);
}

PmfVector pmf_nbd(double r, double beta, std::int64_t kmax) {
  if (!(r > 0.0)) throw std::domain_error("pmf_nbd: r must be positive");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::domain_error("pmf_nbd: beta must lie in [0, 1)");
  if (kmax < 0) throw std::invalid_argument("pmf_nbd: kmax must be >= 0");
  PmfVector out;
  out.p.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  if (beta == 0.0) {
    out.p[0] = 1.0;
    return out;
  }
  const double log_p0 = r * std::log1p(-beta);
  if (log_p0 > -690.0) {
    out.p[0] = std::exp(log_p0);
    for (std::int64_t k = 0; k < kmax; ++k) {
      const auto kd = static_cast<double>(k);
      out.p[k + 1] = out.p[k] * beta * (kd + r) / (kd + 1.0);
    }
  } else {
    // p0 underflows: run the same recurrence on logarithms.
    const double log_beta = std::log(beta);
    double lp = log_p0;
    out.p[0] = std::exp(lp);
    for (std::int64_t k = 0; k < kmax; ++k) {
      const auto kd = static_cast<double>(k);
      lp += log_beta + std::log((kd + r) / (kd + 1.0));
      out.p[k + 1] = std::exp(lp);
    }
  }
  out.tail_mass = boost::math::ibeta(static_cast<double>(kmax) + 1.0, r, beta);
  return out;
}

PmfVector pmf_bd(const IntegralTables& tables, double t, std::int64_t initial,
                 std::int64_t kmax) {
  if (kmax < 0) throw std::invalid_argument("pmf_bd: kmax must be >= 0");
  if (initial < 0) throw std::invalid_argument("pmf_bd: initial count must be >= 0");
  PmfVector out;
  out.t = t;
  out.p.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
  const TableRow row = tables.at(t);
  const double alpha = row.alpha();
  const double beta = row.beta();
  if (initial == 0 || alpha >= 1.0) {
    out.p[0] = 1.0;
    return out;
  }
  const auto n = static_cast<double>(initial);
  out.p[0] = std::pow(alpha, n);
  const double log_surv = std::log1p(-alpha);
  const double log_alpha = alpha > 0.0 ? std::log(alpha) : -INFINITY;
  const double log_1mb = std::log1p(-beta);
  const double log_beta = beta > 0.0 ? std::log(beta) : -INFINITY;
  const std::int64_t jmax = std::min(initial, kmax);
  for (std::int64_t j = 1; j <= jmax; ++j) {
    const auto jd = static_cast<double>(j);
    // Binomial(I0, 1 - alpha) at j, times (1 - beta)^j.
    double lp = std::lgamma(n + 1) - std::lgamma(jd + 1) - std::lgamma(n - jd + 1) +
                jd * log_surv + (n - jd > 0 ? (n - jd) * log_alpha : 0.0) + jd * log_1mb;
    out.p[j] += std::exp(lp);
    if (beta == 0.0) continue;
    // NB(j, beta) ratio recurrence: C(m+j-1, m) beta^m.
    for (std::int64_t m = 0; j + m < kmax; ++m) {
      const auto md = static_cast<double>(m);
      lp += log_beta + std::log((md + jd) / (md + 1.0));
      out.p[j + m + 1] += std::exp(lp);
    }
  }
  out.tail_mass = std::max(0.0, 1.0 - out.mass());
  return out;
}

PmfVector pmf_from_pgf(const std::function<Complex(Complex)>& pgf, std::int64_t kmax) {
  if (kmax < 0) throw std::invalid_argument("pmf_from_pgf: kmax must be >= 0");
  const std::size_t n = std::bit_ceil(static_cast<std::size_t>(kmax) + 1);
  std::vector<Complex> values(n);
  values[0] = pgf({1.0, 0.0});
  for (std::size_t j = 1; j <= n / 2; ++j) {
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                          static_cast<double>(n));
    values[j] = pgf(w);
    if (j < n - j) values[n - j] = std::conj(values[j]);
  }
  const Complex g1 = values[0];
  fft(values, false);

  PmfVector out;
  out.p.resize(static_cast<std::size_t>(kmax) + 1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < out.p.size(); ++k) {
    const Complex c = values[k] * scale;
    if (std::abs(c.imag()) > 1e-9) {
      throw PgfError("pmf_from_pgf: coefficient has an imaginary part; evaluator is not a PGF");
    }
    if (c.real() < -1e-9) {
      throw PgfError("pmf_from_pgf: negative coefficient; evaluator is not a PGF");
    }
    out.p[k] = std::max(0.0, c.real());
  }
  const double mass = out.mass();
  if (std::abs(mass - g1.real()) > 1e-6) {
    throw AliasingError("pmf_from_pgf: mass beyond kmax is not negligible; raise kmax");
  }
  out.tail_mass = std::max(0.0, g1.real() - mass);
  return out;
}

PmfVector equilibrium_pmf(double r, double r_inf, std::int64_t kmax) {
  if (!(r_inf >= 0.0 && r_inf < 1.0)) {
    throw std::domain_error("equilibrium_pmf: R_inf must lie in [0, 1)");
  }
  PmfVector out = pmf_nbd(r, r_inf, kmax);
  out.t = INFINITY;
  return out;
}

std::int64_t default_kmax(double mean, double stddev) {
  const double target = std::ceil(std::max(1.0, mean + 12.0 * stddev));
  return static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(target)));
}

std::int64_t default_kmax_nbd(double r, double beta, double eps) {
  if (!(r > 0.0) || !(beta >= 0.0 && beta < 1.0)) throw std::domain_error("default_kmax_nbd: bad r or beta");
  std::int64_t k = 1;
  while (beta > 0.0 && boost::math::ibeta(static_cast<double>(k) + 1.0, r, beta) > eps) {
    if (k > (std::int64_t{1} << 40)) throw std::domain_error("default_kmax_nbd: tail too heavy");
    k *= 2;
  }
  return k;
}

}  // namespace bdi
