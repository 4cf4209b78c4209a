#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "bdi/pgf.hpp"
#include "bdi/presets.hpp"

using namespace bdi;

namespace {

// Frozen with mpmath from the constant-rate closed forms at t = 10:
// M = 0.5 (1 - e^-2), L = 1.5 (1 - e^-2).
constexpr double kAlpha10 = 0.301838016750637423;
constexpr double kBeta10 = 0.905514050251912270;
constexpr double kP0Nbd10 = 0.207449068254811772;  // (1 - beta)^(2/3)
constexpr double kMeanNbd10 = 6.38905609893065023;  // e^2 - 1
constexpr double kP1Bd10 = 0.0659664980653245400;
constexpr double kP2Bd10 = 0.0597335908440669591;

const IntegralTables& example_tables() {
  static const IntegralTables t = IntegralTables::build(presets::example_bdi(120));
  return t;
}

std::vector<Complex> unit_circle(int n) {
  std::vector<Complex> z;
  for (int j = 0; j < n; ++j) z.push_back(std::polar(1.0, 2 * std::numbers::pi * (j + 0.5) / n));
  return z;
}

ModelParams with_nu(RateSchedule nu, RateSchedule lambda = presets::example_lambda()) {
  ModelParams p = presets::example_bdi(120);
  p.lambda = std::move(lambda);
  p.nu = std::move(nu);
  return p;
}

}  // namespace

TEST_CASE("pgf_bd") {
  const auto& tb = example_tables();
  CHECK(std::abs(pgf_bd(1.0, tb, 10, 1) - 1.0) < 1e-15);
  CHECK(std::abs(pgf_bd(1.0, tb, 73.2, 5) - 1.0) < 1e-12);
  const Complex z = std::polar(0.9, 0.7);
  CHECK(std::abs(pgf_bd(z, tb, 0, 3) - z * z * z) < 1e-15);
  CHECK(std::abs(pgf_bd(0.0, tb, 10, 1) - kAlpha10) < 1e-10);
  CHECK(pgf_bd(0.3, tb, 10, 0) == Complex(1.0));
  CHECK_THROWS_AS(pgf_bd(1.5, tb, 10, 1), std::domain_error);
}

TEST_CASE("pgf_descendants") {
  const auto& tb = example_tables();
  for (Complex z : unit_circle(8)) {
    CHECK(std::abs(pgf_descendants(z, 30, 30, tb) - z) < 1e-14);
    CHECK(std::abs(pgf_descendants(z, 0, 60, tb) - pgf_bd(z, tb, 60, 1)) < 1e-12);
  }
  CHECK(pgf_descendants(1.0, 3, 60, tb) == Complex(1.0));
  CHECK_THROWS(pgf_descendants(0.5, 61, 60, tb));
}

TEST_CASE("pgf_id_numeric basics") {
  const auto& tb = example_tables();
  CHECK(pgf_id_numeric(1.0, tb, 40) == Complex(1.0));
  CHECK(std::abs(pgf_id_numeric(0.0, tb, 10) - kP0Nbd10) < 1e-8);

  const auto no_imm = IntegralTables::build(with_nu(RateSchedule::constant(0.0)));
  for (Complex z : unit_circle(6)) CHECK(pgf_id_numeric(z, no_imm, 50) == Complex(1.0));
}

TEST_CASE("Bartlett-Bailey form equals the direct integrand form") {
  const auto& tb = example_tables();
  for (double t : {1.0, 5.0, 10.0, 52.0, 60.0, 110.0}) {
    for (Complex z : unit_circle(16)) {
      const Complex a = pgf_id_numeric(z, tb, t);
      const Complex b = pgf_id_direct(z, tb, t);
      CHECK(std::abs(a - b) < 1e-10);
    }
  }
}

TEST_CASE("pgf_nbd_factor") {
  const auto& tb = example_tables();
  CHECK(std::abs(pgf_nbd_factor(1.0, tb, 20, 0.7) - 1.0) < 1e-15);
  const Complex z = std::polar(0.8, 2.0);
  const double b = tb.at(20).beta();
  CHECK(std::abs(pgf_nbd_factor(z, tb, 20, 1.0) - (1 - b) / (1.0 - b * z)) < 1e-12);
  CHECK(std::abs(pgf_nbd_factor(z, tb, 0, 0.7) - 1.0) < 1e-15);
  CHECK_THROWS(pgf_nbd_factor(z, tb, 20, 0.0));
}

TEST_CASE("pgf_correction") {
  const auto& tb = example_tables();
  for (Complex z : unit_circle(5)) CHECK(pgf_correction(z, tb, 80, {}) == Complex(1.0));

  const auto matched = IntegralTables::build(with_nu(RateSchedule::raised_cosine(0.2, 0.04, 50, 5)));
  CHECK(pgf_correction(1.0, matched, 60) == Complex(1.0));
  const Complex id = pgf_id_numeric(0.5, matched, 60);
  const Complex fac = pgf_nbd_factor(0.5, matched, 60, initial_ratio(matched)) *
                      pgf_correction(0.5, matched, 60);
  CHECK(std::abs(id - fac) < 1e-8);
  CHECK(std::abs(pgf_correction(0.5, matched, 60) - 1.0) < 1e-10);

  auto zero_lambda = with_nu(RateSchedule::constant(0.2), RateSchedule::raised_cosine(0.3, 0.0, 10, 5));
  const auto zl = IntegralTables::build(zero_lambda);
  CHECK_THROWS_AS(pgf_correction(0.5, zl, 30), std::domain_error);
  CHECK_NOTHROW(pgf_correction(0.5, zl, 9));
}

TEST_CASE("factorization holds when nu deviates from r*lambda") {
  const std::vector<ModelParams> cases = {
      with_nu(RateSchedule::constant(0.2)),
      with_nu(RateSchedule::raised_cosine(0.2, 0.04, 45, 10)),
      with_nu(RateSchedule::raised_cosine(0.25, 0.02, 60, 0)),
      with_nu(RateSchedule::piecewise_constant({20, 70}, {0.2, 0.1, 0.05}),
              RateSchedule::raised_cosine(0.3, 0.06, 50, 0)),
  };
  for (const auto& p : cases) {
    const auto tb = IntegralTables::build(p);
    const double r0 = initial_ratio(tb);
    for (double t : {15.0, 57.0, 100.0}) {
      double dev = 0;
      for (Complex z : unit_circle(16)) {
        const Complex id = pgf_id_numeric(z, tb, t);
        const Complex fac = pgf_nbd_factor(z, tb, t, r0) * pgf_correction(z, tb, t);
        dev = std::max(dev, std::abs(id - fac));
      }
      CHECK(dev < 1e-8);
    }
  }
}

TEST_CASE("pgf_bdi composition") {
  auto p = presets::example_bdi(120);
  p.initial_infected = 0;
  const auto tb0 = IntegralTables::build(p);
  const Complex z = std::polar(1.0, 1.1);
  CHECK(pgf_bdi(z, tb0, 30) == pgf_id_numeric(z, tb0, 30));
  const auto tbd = IntegralTables::build(presets::example_bd(120));
  CHECK(pgf_bdi(z, tbd, 30) == pgf_bd(z, tbd, 30, 1));
  p.initial_infected = 3;
  const auto tb3 = IntegralTables::build(p);
  CHECK(std::abs(pgf_bdi(1.0, tb3, 70) - 1.0) < 1e-12);
}

TEST_CASE("normalization at z = 1 for every PGF") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0, 120);
  const auto& tb = example_tables();
  const auto dev = IntegralTables::build(with_nu(RateSchedule::constant(0.2)));
  for (int i = 0; i < 20; ++i) {
    const double t = ut(rng);
    CHECK(std::abs(pgf_bd(1.0, tb, t, 2) - 1.0) < 1e-9);
    CHECK(std::abs(pgf_id_numeric(1.0, dev, t) - 1.0) < 1e-9);
    CHECK(std::abs(pgf_correction(1.0, dev, t) - 1.0) < 1e-9);
    CHECK(std::abs(pgf_nbd_factor(1.0, dev, t, 0.5) - 1.0) < 1e-9);
    CHECK(std::abs(ImmigrationPgf(dev, t)(1.0) - 1.0) < 1e-9);
  }
}

TEST_CASE("compiled immigration PGF agrees with pointwise quadrature") {
  const auto dev = IntegralTables::build(with_nu(RateSchedule::raised_cosine(0.2, 0.04, 45, 10)));
  for (double t : {3.0, 50.0, 90.0}) {
    ImmigrationPgf g(dev, t);
    CHECK(g.panel_count() > 0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
    for (int i = 0; i < 50; ++i) {
      const Complex z = std::polar(1.0, ang(rng));
      CHECK(std::abs(g(z) - pgf_id_numeric(z, dev, t)) < 1e-11);
    }
    CHECK(g.fallback_count() == 0);
  }
}

TEST_CASE("pmf_nbd") {
  const auto eq = pmf_nbd(2.0 / 3.0, 0.6, 200);
  CHECK(eq.p[0] == doctest::Approx(0.5429).epsilon(1e-4));
  const auto point = pmf_nbd(0.7, 0.0, 10);
  CHECK(point.p[0] == 1.0);
  CHECK(point.mass() == 1.0);
  CHECK(point.tail_mass == 0.0);

  const auto at10 = pmf_nbd(2.0 / 3.0, kBeta10, 2048);
  CHECK(std::abs(at10.p[0] - kP0Nbd10) < 1e-12);
  CHECK(at10.mean() == doctest::Approx(kMeanNbd10).epsilon(1e-9));
  CHECK(std::abs(at10.mass() + at10.tail_mass - 1.0) < 1e-9);

  CHECK_THROWS_AS(pmf_nbd(0.5, 1.0, 10), std::domain_error);
  CHECK_THROWS_AS(pmf_nbd(0.0, 0.5, 10), std::domain_error);

  // near-degenerate beta stays finite and normalized
  const auto fat = pmf_nbd(2.0 / 3.0, 1 - 1e-12, 1000);
  CHECK(std::isfinite(fat.p[1000]));
  CHECK(std::abs(fat.mass() + fat.tail_mass - 1.0) < 1e-9);
}

TEST_CASE("pmf_nbd normalization property") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ur(0.05, 20), ub(0, 0.999);
  std::uniform_int_distribution<int> uk(0, 3000);
  for (int i = 0; i < 200; ++i) {
    const auto pmf = pmf_nbd(ur(rng), ub(rng), uk(rng));
    REQUIRE(pmf.tail_mass >= 0);
    for (double v : pmf.p) REQUIRE(v >= 0);
    CHECK(std::abs(pmf.mass() + pmf.tail_mass - 1.0) < 1e-9);
  }
}

TEST_CASE("pmf_bd") {
  const auto& tb = example_tables();
  const auto p1 = pmf_bd(tb, 10, 1, 400);
  CHECK(std::abs(p1.p[0] - kAlpha10) < 1e-10);
  CHECK(std::abs(p1.p[1] - kP1Bd10) < 1e-10);
  CHECK(std::abs(p1.p[2] - kP2Bd10) < 1e-10);

  const auto at0 = pmf_bd(tb, 0, 4, 10);
  CHECK(at0.p[4] == doctest::Approx(1.0));
  CHECK(at0.mass() == doctest::Approx(1.0));
  CHECK(pmf_bd(tb, 30, 0, 5).p[0] == 1.0);
  CHECK_THROWS(pmf_bd(tb, 10, 1, -1));

  // I0 = 2 equals the self-convolution of the I0 = 1 law
  const auto one = pmf_bd(tb, 7, 1, 300);
  const auto two = pmf_bd(tb, 7, 2, 300);
  for (std::size_t k = 0; k <= 300; ++k) {
    double conv = 0;
    for (std::size_t j = 0; j <= k; ++j) conv += one.p[j] * one.p[k - j];
    CHECK(std::abs(conv - two.p[k]) < 1e-14);
  }

  // DFT inversion of the rational PGF as an independent route
  const auto dft = pmf_from_pgf([&](Complex z) { return pgf_bd(z, tb, 10, 3); }, 1023);
  const auto direct = pmf_bd(tb, 10, 3, 1023);
  for (std::size_t k = 0; k < 1024; ++k) CHECK(std::abs(dft.p[k] - direct.p[k]) < 1e-12);
}

TEST_CASE("pmf_from_pgf") {
  const auto pois = pmf_from_pgf([](Complex z) { return std::exp(2.0 * (z - 1.0)); }, 63);
  CHECK(std::abs(pois.p[0] - 0.135335283236612692) < 1e-14);
  double term = std::exp(-2.0);
  for (int k = 0; k < 40; ++k) {
    CHECK(std::abs(pois.p[k] - term) < 1e-14);
    term *= 2.0 / (k + 1);
  }

  const double r = 2.0 / 3.0;
  const auto nbd_pgf = [&](Complex z) { return std::pow((1 - kBeta10) / (1.0 - kBeta10 * z), r); };
  const auto dft = pmf_from_pgf(nbd_pgf, 1024);
  const auto exact = pmf_nbd(r, kBeta10, 1024);
  for (std::size_t k = 0; k <= 1024; ++k) CHECK(std::abs(dft.p[k] - exact.p[k]) < 1e-9);

  const auto one = pmf_from_pgf([](Complex) { return Complex(1.0); }, 15);
  CHECK(one.p[0] == doctest::Approx(1.0));
  for (int k = 1; k <= 15; ++k) CHECK(std::abs(one.p[k]) < 1e-15);

  CHECK_THROWS_AS(pmf_from_pgf([](Complex z) { return std::exp(100.0 * (z - 1.0)); }, 64),
                  AliasingError);
  CHECK_THROWS_AS(pmf_from_pgf([](Complex z) { return 2.0 - z; }, 7), PgfError);
}

TEST_CASE("equilibrium_pmf") {
  const auto eq = equilibrium_pmf(2.0 / 3.0, 0.06 / 0.1, 400);
  CHECK(std::abs(eq.p[0] - 0.542883523318981314) < 1e-12);
  CHECK(eq.mean() == doctest::Approx(1.0).epsilon(1e-9));
  const auto pm = equilibrium_pmf(2.0 / 3.0, 0.0, 5);
  CHECK(pm.p[0] == 1.0);
  CHECK_THROWS(equilibrium_pmf(0.5, 1.0, 5));
}

TEST_CASE("DFT of the numeric BDI PGF is NB(r, beta(t)) under proportional immigration") {
  const auto& tb = example_tables();
  for (double t : {5.0, 10.0}) {
    const double beta = tb.at(t).beta();
    const std::int64_t kmax = default_kmax_nbd(2.0 / 3.0, beta);
    BdiPgf g(tb, t);
    const auto dft = pmf_from_pgf(std::cref(g), kmax);
    const auto ref = pmf_nbd(2.0 / 3.0, beta, kmax);
    double dev = 0;
    for (std::size_t k = 0; k < ref.p.size(); ++k) dev = std::max(dev, std::abs(dft.p[k] - ref.p[k]));
    CHECK(dev < 1e-8);
  }
}

TEST_CASE("default_kmax") {
  CHECK(default_kmax(0, 0) == 1);
  CHECK(default_kmax(6.39, 8.22) == 128);
  CHECK(default_kmax(100, 0) == 128);
  CHECK(default_kmax(128, 0) == 128);
  CHECK(default_kmax_nbd(1.0, 0.0) == 1);
  const auto k = default_kmax_nbd(2.0 / 3.0, kBeta10);
  CHECK(pmf_nbd(2.0 / 3.0, kBeta10, k).tail_mass <= 1e-10);
  CHECK(pmf_nbd(2.0 / 3.0, kBeta10, k / 2).tail_mass > 1e-10);
}
