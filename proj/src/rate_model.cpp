#include "bdi/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bdi {

namespace {

void require_rate(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string(what) + " must be a finite nonnegative number");
  }
}

}  // namespace

RateSchedule RateSchedule::constant(double value) {
  return raised_cosine(value, value, 0.0, 0.0);
}

RateSchedule RateSchedule::raised_cosine(double v0, double v1, double t1, double d) {
  require_rate(v0, "v0");
  require_rate(v1, "v1");
  require_rate(t1, "t1");
  require_rate(d, "d");
  RateSchedule r;
  r.kind_ = Kind::raised_cosine;
  r.v0_ = v0;
  r.v1_ = v1;
  r.t1_ = t1;
  r.d_ = d;
  return r;
}

RateSchedule RateSchedule::piecewise_constant(std::vector<double> breaks,
                                              std::vector<double> values) {
  if (values.size() != breaks.size() + 1) {
    throw std::invalid_argument("piecewise_constant: need one more value than breaks");
  }
  for (double v : values) require_rate(v, "piecewise value");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    require_rate(breaks[i], "break");
    if (i > 0 && !(breaks[i] > breaks[i - 1])) {
      throw std::invalid_argument("piecewise_constant: breaks must be strictly increasing");
    }
  }
  RateSchedule r;
  r.kind_ = Kind::piecewise_constant;
  r.v0_ = values.front();
  r.v1_ = values.back();
  r.t1_ = breaks.empty() ? 0.0 : breaks.front();
  r.d_ = breaks.empty() ? 0.0 : breaks.back() - breaks.front();
  r.breaks_ = std::move(breaks);
  r.values_ = std::move(values);
  return r;
}

double RateSchedule::eval(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("rate schedule evaluated at negative time");
  if (kind_ == Kind::piecewise_constant) {
    auto idx = std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin();
    return values_[static_cast<std::size_t>(idx)];
  }
  if (t < t1_) return v0_;
  if (t < t1_ + d_) {
    const double x = (t - t1_) / d_;
    return v1_ + (v0_ - v1_) * 0.5 * (1.0 + std::cos(std::numbers::pi * x));
  }
  return v1_;
}

double RateSchedule::eval_left(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("rate schedule evaluated at negative time");
  if (t == 0.0) return eval(0.0);
  if (kind_ == Kind::piecewise_constant) {
    auto idx = std::lower_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin();
    return values_[static_cast<std::size_t>(idx)];
  }
  if (d_ == 0.0 && t == t1_) return v0_;
  return eval(t);
}

double RateSchedule::derivative(double t) const {
  if (kind_ == Kind::piecewise_constant || d_ == 0.0) return 0.0;
  if (t >= t1_ && t < t1_ + d_) {
    const double k = std::numbers::pi / d_;
    return -0.5 * (v0_ - v1_) * k * std::sin(k * (t - t1_));
  }
  return 0.0;
}

double RateSchedule::derivative_left(double t) const {
  if (kind_ == Kind::piecewise_constant || d_ == 0.0) return 0.0;
  if (t > t1_ && t <= t1_ + d_) {
    const double k = std::numbers::pi / d_;
    return -0.5 * (v0_ - v1_) * k * std::sin(k * (t - t1_));
  }
  return 0.0;
}

double RateSchedule::antiderivative(double t) const {
  if (kind_ == Kind::piecewise_constant) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (t <= breaks_[i]) return acc + values_[i] * (t - prev);
      acc += values_[i] * (breaks_[i] - prev);
      prev = breaks_[i];
    }
    return acc + values_.back() * (t - prev);
  }
  if (t <= t1_) return v0_ * t;
  if (t < t1_ + d_) {
    const double x = t - t1_;
    return v0_ * t1_ + 0.5 * (v0_ + v1_) * x +
           0.5 * (v0_ - v1_) * (d_ / std::numbers::pi) * std::sin(std::numbers::pi * x / d_);
  }
  return v0_ * t1_ + 0.5 * (v0_ + v1_) * d_ + v1_ * (t - t1_ - d_);
}

double RateSchedule::integral(double a, double b) const {
  if (a < 0.0 || b < a) throw std::domain_error("integral: need 0 <= a <= b");
  return antiderivative(b) - antiderivative(a);
}

double RateSchedule::max_on(double a, double b) const {
  double m = eval(a);
  if (b > a) m = std::max(m, eval_left(b));
  for (double k : knots()) {
    if (k > a && k < b) m = std::max({m, eval(k), eval_left(k)});
  }
  return m;
}

double RateSchedule::min_on(double a, double b) const {
  double m = std::min(eval(a), eval(b));
  if (b > a) m = std::min(m, eval_left(b));
  for (double k : knots()) {
    if (k > a && k < b) m = std::min({m, eval(k), eval_left(k)});
  }
  return m;
}

std::vector<double> RateSchedule::knots() const {
  if (kind_ == Kind::piecewise_constant) return breaks_;
  if (v0_ == v1_) return {};
  if (d_ == 0.0) return {t1_};
  return {t1_, t1_ + d_};
}

double RateSchedule::settle_time() const {
  auto k = knots();
  return k.empty() ? 0.0 : k.back();
}

double RateSchedule::settle_value() const { return v1_; }

bool RateSchedule::is_zero() const {
  if (kind_ == Kind::piecewise_constant) {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }
  return v0_ == 0.0 && v1_ == 0.0;
}

RateSchedule RateSchedule::scaled(double factor) const {
  require_rate(factor, "scale factor");
  RateSchedule r = *this;
  r.v0_ *= factor;
  r.v1_ *= factor;
  for (double& v : r.values_) v *= factor;
  return r;
}

void ModelParams::validate() const {
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw std::invalid_argument("horizon must be positive");
  }
  if (initial_infected < 0) throw std::invalid_argument("initial_infected must be >= 0");
  if (!(fatality_rate >= 0.0 && fatality_rate <= 1.0)) {
    throw std::invalid_argument("fatality_rate must lie in [0, 1]");
  }
  if (proportional()) require_rate(ratio(), "immigration ratio");
}

double ModelParams::ratio() const {
  if (const auto* p = std::get_if<ProportionalImmigration>(&nu)) return p->ratio;
  throw std::logic_error("ratio() requires proportional immigration");
}

RateSchedule ModelParams::immigration() const {
  if (const auto* p = std::get_if<ProportionalImmigration>(&nu)) {
    return lambda.scaled(p->ratio);
  }
  return std::get<RateSchedule>(nu);
}

std::vector<double> ModelParams::knots() const {
  std::vector<double> all;
  for (const RateSchedule* s : {&lambda, &mu}) {
    auto k = s->knots();
    all.insert(all.end(), k.begin(), k.end());
  }
  auto k = immigration().knots();
  all.insert(all.end(), k.begin(), k.end());
  std::erase_if(all, [&](double x) { return x <= 0.0 || x >= horizon; });
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

bool ModelParams::settled_by_horizon() const {
  return lambda.settle_time() <= horizon && mu.settle_time() <= horizon &&
         immigration().settle_time() <= horizon;
}

double TableRow::alpha_alt() const { return 1.0 - 1.0 / (std::exp(-s) + L); }

namespace {

// e^{-s(u)} * (lambda, mu, nu, 1).
using Integrand = std::array<double, 4>;

struct CellContext {
  const RateSchedule* lambda;
  const RateSchedule* mu;
  const RateSchedule* nu;

  double s_at(double u) const { return lambda->integral(0.0, u) - mu->integral(0.0, u); }

  Integrand eval(double u, bool left) const {
    const double e = std::exp(-s_at(u));
    if (left) return {lambda->eval_left(u) * e, mu->eval_left(u) * e, nu->eval_left(u) * e, e};
    return {lambda->eval(u) * e, mu->eval(u) * e, nu->eval(u) * e, e};
  }
};

Integrand simpson(const Integrand& fa, const Integrand& fm, const Integrand& fb, double h) {
  Integrand out{};
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = h / 6.0 * (fa[k] + 4.0 * fm[k] + fb[k]);
  return out;
}

// Adaptive Simpson with Richardson extrapolation over one cell.
Integrand adaptive_simpson(const CellContext& ctx, double a, double b, const Integrand& fa,
                           const Integrand& fm, const Integrand& fb, const Integrand& whole,
                           double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Integrand flm = ctx.eval(0.5 * (a + m), false);
  const Integrand frm = ctx.eval(0.5 * (m + b), false);
  const Integrand left = simpson(fa, flm, fm, m - a);
  const Integrand right = simpson(fm, frm, fb, b - m);
  double err = 0.0;
  double mag = 0.0;
  Integrand sum{};
  for (std::size_t k = 0; k < sum.size(); ++k) {
    sum[k] = left[k] + right[k];
    err = std::max(err, std::abs(sum[k] - whole[k]) / 15.0);
    mag = std::max(mag, std::abs(sum[k]));
  }
  if (depth <= 0 || err <= std::max(tol, 1e-15 * mag)) {
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (sum[k] - whole[k]) / 15.0;
    return sum;
  }
  const Integrand l = adaptive_simpson(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
  const Integrand r = adaptive_simpson(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = l[k] + r[k];
  return sum;
}

}  // namespace

IntegralTables IntegralTables::build(const ModelParams& params, double step, double tol) {
  params.validate();
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");

  IntegralTables tables;
  tables.params_ = params;
  tables.nu_ = params.immigration();
  tables.step_ = step;
  tables.tol_ = tol;

  const double horizon = params.horizon;
  const auto knots = params.knots();
  const double snap = 1e-9 * step;

  std::vector<double>& grid = tables.grid_;
  const auto n_uniform = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
  grid.reserve(n_uniform + knots.size() + 2);
  std::size_t next_knot = 0;
  for (std::size_t i = 0; i < n_uniform; ++i) {
    const double t = static_cast<double>(i) * step;
    while (next_knot < knots.size() && knots[next_knot] < t - snap) {
      grid.push_back(knots[next_knot++]);
    }
    if (next_knot < knots.size() && std::abs(knots[next_knot] - t) <= snap) {
      grid.push_back(knots[next_knot++]);
    } else {
      grid.push_back(t);
    }
  }
  while (next_knot < knots.size()) grid.push_back(knots[next_knot++]);
  if (horizon - grid.back() <= snap) grid.back() = horizon;
  else grid.push_back(horizon);

  const std::size_t n = grid.size();
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    tables.values_[c].assign(n, 0.0);
    tables.slope_right_[c].assign(n, 0.0);
    tables.slope_left_[c].assign(n, 0.0);
  }

  const CellContext ctx{&params.lambda, &params.mu, &tables.nu_};
  auto& v = tables.values_;
  std::array<double, 4> acc{};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid[i];
    v[0][i] = ctx.s_at(t);
    v[5][i] = params.mu.integral(0.0, t);
    if (i > 0) {
      const double a = grid[i - 1];
      const Integrand fa = ctx.eval(a, false);
      const Integrand fb = ctx.eval(t, true);
      const Integrand fm = ctx.eval(0.5 * (a + t), false);
      const Integrand whole = simpson(fa, fm, fb, t - a);
      const Integrand cell =
          adaptive_simpson(ctx, a, t, fa, fm, fb, whole, tol * (t - a) / horizon, 30);
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += cell[k];
    }
    for (std::size_t k = 0; k < acc.size(); ++k) v[k + 1][i] = acc[k];

    const double e = std::exp(-v[0][i]);
    const double lr = params.lambda.eval(t), mr = params.mu.eval(t), nr = tables.nu_.eval(t);
    const double ll = params.lambda.eval_left(t), ml = params.mu.eval_left(t),
                 nl = tables.nu_.eval_left(t);
    const std::array<double, kColumnCount> right{lr - mr, lr * e, mr * e, nr * e, e, mr};
    const std::array<double, kColumnCount> left{ll - ml, ll * e, ml * e, nl * e, e, ml};
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      tables.slope_right_[c][i] = right[c];
      tables.slope_left_[c][i] = left[c];
    }
  }
  return tables;
}

std::size_t IntegralTables::cell_of(double t) const {
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - grid_.begin());
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, grid_.size() - 2);
}

double IntegralTables::interpolate(std::size_t c, std::size_t cell, double t) const {
  const double a = grid_[cell];
  const double b = grid_[cell + 1];
  const double y0 = values_[c][cell];
  const double y1 = values_[c][cell + 1];
  if (t == a) return y0;
  if (t == b) return y1;
  const double h = b - a;
  double m0 = slope_right_[c][cell];
  double m1 = slope_left_[c][cell + 1];
  if (c != static_cast<std::size_t>(Column::s)) {
    // Fritsch-Carlson limiter keeps the nondecreasing columns monotone.
    const double delta = (y1 - y0) / h;
    if (delta <= 0.0) {
      m0 = m1 = 0.0;
    } else {
      const double al = std::max(0.0, m0 / delta);
      const double be = std::max(0.0, m1 / delta);
      const double r2 = al * al + be * be;
      const double scale = r2 > 9.0 ? 3.0 / std::sqrt(r2) : 1.0;
      m0 = scale * al * delta;
      m1 = scale * be * delta;
    }
  }
  const double x = (t - a) / h;
  const double x2 = x * x;
  const double x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * h * m0 + (-2 * x3 + 3 * x2) * y1 +
         (x3 - x2) * h * m1;
}

double IntegralTables::value(Column c, double t) const {
  if (!(t >= 0.0 && t <= horizon())) {
    throw std::out_of_range("table query outside [0, horizon]");
  }
  return interpolate(static_cast<std::size_t>(c), cell_of(t), t);
}

TableRow IntegralTables::at(double t) const {
  if (!(t >= 0.0 && t <= horizon())) {
    throw std::out_of_range("table query outside [0, horizon]");
  }
  const std::size_t cell = cell_of(t);
  TableRow r;
  r.t = t;
  r.s = interpolate(0, cell, t);
  r.L = interpolate(1, cell, t);
  r.M = interpolate(2, cell, t);
  r.N = interpolate(3, cell, t);
  r.Sigma = interpolate(4, cell, t);
  r.mu_integral = interpolate(5, cell, t);
  r.gamma = std::exp(-r.mu_integral);
  return r;
}

TableRow IntegralTables::row(std::size_t i) const {
  TableRow r;
  r.t = grid_.at(i);
  r.s = values_[0][i];
  r.L = values_[1][i];
  r.M = values_[2][i];
  r.N = values_[3][i];
  r.Sigma = values_[4][i];
  r.mu_integral = values_[5][i];
  r.gamma = std::exp(-r.mu_integral);
  return r;
}

TableRow IntegralTables::at_extended(double t) const {
  if (t <= horizon()) return at(t);
  if (!params_.settled_by_horizon()) {
    throw std::domain_error("rates are not constant beyond the horizon");
  }
  const TableRow h = row(grid_.size() - 1);
  const double lam = params_.lambda.settle_value();
  const double mu = params_.mu.settle_value();
  const double nu = nu_.settle_value();
  const double a = lam - mu;
  const double tau = t - horizon();
  // E = int_0^tau e^{-a x} dx
  const double E = a == 0.0 ? tau : -std::expm1(-a * tau) / a;
  const double w = std::exp(-h.s);
  TableRow r;
  r.t = t;
  r.s = h.s + a * tau;
  r.L = h.L + lam * w * E;
  r.M = h.M + mu * w * E;
  r.N = h.N + nu * w * E;
  r.Sigma = h.Sigma + w * E;
  r.mu_integral = h.mu_integral + mu * tau;
  r.gamma = std::exp(-r.mu_integral);
  return r;
}

double IntegralTables::identity_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double r = values_[1][i] - values_[2][i] + std::exp(-values_[0][i]) - 1.0;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace bdi
