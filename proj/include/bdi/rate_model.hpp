#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace bdi {

// A nonnegative rate of time (1/day). Two shapes are supported: a
// raised-cosine step from v0 to v1 over [t1, t1+d), and a piecewise-constant
// function. A constant rate is the degenerate raised cosine with v0 == v1.
class RateSchedule {
 public:
  RateSchedule() = default;

  static RateSchedule constant(double value);
  static RateSchedule raised_cosine(double v0, double v1, double t1, double d);
  // values.size() must equal breaks.size() + 1; breaks strictly increasing.
  static RateSchedule piecewise_constant(std::vector<double> breaks,
                                         std::vector<double> values);

  // Right-continuous value. Throws std::domain_error for t < 0.
  double eval(double t) const;
  // Left limit at t (equal to eval except at jump knots).
  double eval_left(double t) const;
  // One-sided derivatives; zero on constant pieces.
  double derivative(double t) const;
  double derivative_left(double t) const;

  // Exact integral over [a, b], a <= b.
  double integral(double a, double b) const;
  // Supremum over [a, b).
  double max_on(double a, double b) const;
  // Infimum over [a, b].
  double min_on(double a, double b) const;

  // Points where the schedule or its derivative can be non-smooth.
  std::vector<double> knots() const;
  // Time after which the schedule is constant, and that constant.
  double settle_time() const;
  double settle_value() const;
  bool is_zero() const;

  RateSchedule scaled(double factor) const;

  bool is_raised_cosine() const { return kind_ == Kind::raised_cosine; }
  double v0() const { return v0_; }
  double v1() const { return v1_; }
  double t1() const { return t1_; }
  double d() const { return d_; }

 private:
  enum class Kind { raised_cosine, piecewise_constant };

  double antiderivative(double t) const;

  Kind kind_ = Kind::raised_cosine;
  double v0_ = 0.0;
  double v1_ = 0.0;
  double t1_ = 0.0;
  double d_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// nu(t) = ratio * lambda(t).
struct ProportionalImmigration {
  double ratio = 0.0;
};

using ImmigrationMode = std::variant<ProportionalImmigration, RateSchedule>;

struct ModelParams {
  RateSchedule lambda;
  RateSchedule mu;
  ImmigrationMode nu = ProportionalImmigration{0.0};
  std::int64_t initial_infected = 0;
  double fatality_rate = 0.0;
  double horizon = 1.0;

  // Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  bool proportional() const {
    return std::holds_alternative<ProportionalImmigration>(nu);
  }
  // Only meaningful in proportional mode.
  double ratio() const;
  RateSchedule immigration() const;
  bool immigration_free() const { return immigration().is_zero(); }

  // Union of all schedule knots in (0, horizon), sorted and deduplicated.
  std::vector<double> knots() const;
  // True when every schedule is constant after the horizon.
  bool settled_by_horizon() const;
};

enum class Column : std::size_t { s = 0, L, M, N, Sigma, mu_integral };
inline constexpr std::size_t kColumnCount = 6;

// One row of the cumulative integrals at a time t.
struct TableRow {
  double t = 0.0;
  double s = 0.0;
  double L = 0.0;
  double M = 0.0;
  double N = 0.0;
  double Sigma = 0.0;
  double mu_integral = 0.0;
  double gamma = 1.0;

  double alpha() const { return M / (1.0 + M); }
  double beta() const { return L / (1.0 + M); }
  // 1 - 1/(e^{-s} + L), equal to alpha() through L - M + e^{-s} = 1.
  double alpha_alt() const;
};

// Cumulative integrals s, L, M, N, Sigma and the mu-only integral on a time
// grid covering [0, horizon]. Immutable after build().
class IntegralTables {
 public:
  static constexpr double kDefaultStep = 0.01;
  static constexpr double kDefaultTol = 1e-9;

  static IntegralTables build(const ModelParams& params,
                              double step = kDefaultStep,
                              double tol = kDefaultTol);

  // Interpolated row; exact at grid points. Throws std::out_of_range outside
  // [0, horizon].
  TableRow at(double t) const;
  double value(Column c, double t) const;
  // Like at(), but continues past the horizon with the closed forms for
  // constant rates. Throws std::domain_error if the rates are not settled.
  TableRow at_extended(double t) const;

  const ModelParams& params() const { return params_; }
  double horizon() const { return params_.horizon; }
  double step() const { return step_; }
  double tol() const { return tol_; }
  std::span<const double> grid() const { return grid_; }
  std::span<const double> column(Column c) const {
    return values_[static_cast<std::size_t>(c)];
  }
  TableRow row(std::size_t i) const;

  // max_i |L - M + e^{-s} - 1| over the grid.
  double identity_residual() const;

 private:
  IntegralTables() = default;

  std::size_t cell_of(double t) const;
  double interpolate(std::size_t c, std::size_t cell, double t) const;

  ModelParams params_;
  RateSchedule nu_;
  double step_ = kDefaultStep;
  double tol_ = kDefaultTol;
  std::vector<double> grid_;
  std::array<std::vector<double>, kColumnCount> values_;
  // Slopes at each grid point: right-sided (start of the next cell) and
  // left-sided (end of the previous cell).
  std::array<std::vector<double>, kColumnCount> slope_right_;
  std::array<std::vector<double>, kColumnCount> slope_left_;
};

}  // namespace bdi
