#pragma once

#include <algorithm>
#include <cstdio>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace bdi {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_intervals = 5000;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// 7-point Gauss / 15-point Kronrod rule on [-1, 1] (QUADPACK constants).
// Index 0 is the outermost node, index 7 the centre; Gauss nodes are the
// odd indices.
namespace gk15 {
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Applies the rule on [a, b]; returns {kronrod, gauss}.
template <class F, class T = std::invoke_result_t<F&, double>>
std::pair<T, T> apply(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T k = kKronrodWeights[7] * fc;
  T g = kGaussWeights[3] * fc;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = h * kNodes[i];
    const T pair = f(c - dx) + f(c + dx);
    k += kKronrodWeights[i] * pair;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * pair;
  }
  return {k * h, g * h};
}
}  // namespace gk15

// Globally adaptive Gauss-Kronrod quadrature over consecutive breakpoints.
// The integrand may be real or complex valued. Non-convergence is reported
// in the result rather than thrown; integrate_or_throw() throws instead.
template <class F, class T = std::invoke_result_t<F&, double>>
QuadratureResult<T> integrate(F&& f, std::span<const double> breakpoints,
                              const QuadratureOptions& opt = {}) {
  struct Piece {
    double a, b;
    T value;
    double err;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  QuadratureResult<T> out;
  if (breakpoints.size() < 2) return out;

  std::priority_queue<Piece> heap;
  T total{};
  double total_err = 0.0;
  auto eval_piece = [&](double a, double b) {
    auto [k, g] = gk15::apply(f, a, b);
    out.evaluations += 15;
    return Piece{a, b, k, std::abs(k - g)};
  };
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i + 1] <= breakpoints[i]) continue;
    Piece p = eval_piece(breakpoints[i], breakpoints[i + 1]);
    total += p.value;
    total_err += p.err;
    heap.push(p);
  }
  int intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= target) {
      out.converged = true;
      break;
    }
    if (intervals >= opt.max_intervals) break;
    Piece worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      // interval cannot be split further in floating point
      heap.push(worst);
      break;
    }
    Piece l = eval_piece(worst.a, m);
    Piece r = eval_piece(m, worst.b);
    total += l.value + r.value - worst.value;
    total_err += l.err + r.err - worst.err;
    heap.push(l);
    heap.push(r);
    ++intervals;
  }
  // Re-sum to shed the cancellation error accumulated by the updates above.
  T resum{};
  double err = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    err += heap.top().err;
    heap.pop();
  }
  out.value = resum;
  out.error = err;
  if (!out.converged) {
    out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(resum));
  }
  return out;
}

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

template <class F, class T = std::invoke_result_t<F&, double>>
T integrate_or_throw(F&& f, std::span<const double> breakpoints,
                     const QuadratureOptions& opt = {}) {
  auto r = integrate(f, breakpoints, opt);
  if (!r.converged) {
    throw QuadratureError("adaptive quadrature did not converge (error estimate " +
                          fmt_g(r.error) + ", value " + fmt_g(std::abs(r.value)) + ")");
  }
  return r.value;
}

// Sorted breakpoints: {a, knots in (a, b)..., b}.
inline std::vector<double> breakpoints_between(double a, double b,
                                               std::span<const double> knots) {
  std::vector<double> out{a};
  for (double k : knots) {
    if (k > a && k < b) out.push_back(k);
  }
  out.push_back(b);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bdi
