#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bdi/quadrature.hpp"
#include "bdi/rate_model.hpp"

namespace bdi {

using Complex = std::complex<double>;

// Truncated PMF over k = 0..kmax; tail_mass carries Pr[K > kmax].
struct PmfVector {
  double t = 0.0;
  std::vector<double> p;
  double tail_mass = 0.0;

  std::int64_t kmax() const { return static_cast<std::int64_t>(p.size()) - 1; }
  double mass() const;
  double mean() const;
  double variance() const;
};

// Raised when the DFT grid is too small for the distribution's support.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an evaluator does not behave like a PGF.
class PgfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Birth-death part with I0 initial infectives:
// ((alpha + (1 - alpha - beta) z) / (1 - beta z))^I0.
Complex pgf_bd(Complex z, const IntegralTables& tables, double t, std::int64_t initial);

// Descendants alive at t of a single immigrant who arrived at u:
// 1 + 1 / (e^{-s(u,t)} / (z - 1) - L(u,t)),  L(u,t) = e^{s(u)} (L(t) - L(u)).
Complex pgf_descendants(Complex z, double u, double t, const IntegralTables& tables);

// Immigrants and their descendants, exp(int_0^t nu(u) (G_desc(z,u,t) - 1) du),
// by adaptive quadrature. Throws QuadratureError on non-convergence.
Complex pgf_id_numeric(Complex z, const IntegralTables& tables, double t,
                       const QuadratureOptions& opt = {});
// Same quantity from the closed-form integrand
// nu(u) e^{s(t)-s(u)} (z-1) / (1 - e^{s(t)} (L(t) - L(u)) (z-1)).
Complex pgf_id_direct(Complex z, const IntegralTables& tables, double t,
                      const QuadratureOptions& opt = {});

// r(0) = nu(0) / lambda(0).
double initial_ratio(const IntegralTables& tables);

// NBD factor ((1 - beta) / (1 - beta z))^r0, in log space.
Complex pgf_nbd_factor(Complex z, const IntegralTables& tables, double t, double r0);

// Correction factor exp(-int_0^t r'(u) log A(u) du) with
// A(u) = 1 - e^{s(t)} (L(t) - L(u)) (z - 1). Jumps of r(u) contribute
// -Delta r * log A at the jump. Identically 1 in proportional mode.
// Throws std::domain_error if lambda vanishes on [0, t] in schedule mode.
Complex pgf_correction(Complex z, const IntegralTables& tables, double t,
                       const QuadratureOptions& opt = {});

// Full BDI PGF: pgf_bd(I0) * pgf_id_numeric.
Complex pgf_bdi(Complex z, const IntegralTables& tables, double t);

// Evaluates the immigration PGF at a fixed t for many z. The quadrature
// partition is refined once against a set of probe points on the unit
// circle and reused; each evaluation checks its own Gauss-Kronrod error
// estimate and falls back to pgf_id_numeric when it is not met.
class ImmigrationPgf {
 public:
  ImmigrationPgf(const IntegralTables& tables, double t, const QuadratureOptions& opt = {});
  Complex operator()(Complex z) const;
  std::size_t panel_count() const { return panels_; }
  std::size_t fallback_count() const { return fallbacks_; }

 private:
  struct Node {
    double kronrod_weight;
    double gauss_weight;
    double decay;   // e^{-s(u,t)}
    double growth;  // L(u,t)
  };
  const IntegralTables* tables_;
  double t_;
  QuadratureOptions opt_;
  std::vector<Node> nodes_;
  std::size_t panels_ = 0;
  mutable std::size_t fallbacks_ = 0;
  bool trivial_ = false;
};

// G_BD * G_ID for DFT inversion at a fixed t.
class BdiPgf {
 public:
  BdiPgf(const IntegralTables& tables, double t, const QuadratureOptions& opt = {});
  Complex operator()(Complex z) const;

 private:
  const IntegralTables* tables_;
  double t_;
  std::int64_t initial_;
  ImmigrationPgf immigration_;
};

// C(k+r-1, k) (1-beta)^r beta^k by the ratio recurrence. Rejects r <= 0 and
// beta outside [0, 1).
PmfVector pmf_nbd(double r, double beta, std::int64_t kmax);

// Exact coefficients of pgf_bd: with J ~ Binomial(I0, 1 - alpha) surviving
// lineages, K = J + NB(J, beta).
PmfVector pmf_bd(const IntegralTables& tables, double t, std::int64_t initial,
                 std::int64_t kmax);

// Inverse DFT over K = bit_ceil(kmax + 1) roots of unity. Uses conjugate
// symmetry, so the PGF must have real coefficients. Throws AliasingError when
// the recovered mass on 0..kmax misses G(1) by more than 1e-6, PgfError on
// negative or complex coefficients beyond 1e-9.
PmfVector pmf_from_pgf(const std::function<Complex(Complex)>& pgf, std::int64_t kmax);

// Limiting NBD with beta = R_inf.
PmfVector equilibrium_pmf(double r, double r_inf, std::int64_t kmax);

// Smallest power of two >= mean + 12 sd.
std::int64_t default_kmax(double mean, double stddev);

// Smallest power of two whose NB(r, beta) tail beyond it is <= eps. The
// moment rule above undershoots for r < 1, where the tail decays like beta^k.
std::int64_t default_kmax_nbd(double r, double beta, double eps = 1e-10);

}  // namespace bdi
