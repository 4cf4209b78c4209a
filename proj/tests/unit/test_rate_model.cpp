#include "doctest.h"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <random>

#include "bdi/presets.hpp"
#include "bdi/rate_model.hpp"

using namespace bdi;

// Closed forms on the constant-rate prefix (lambda0=0.3, mu0=0.1, nu0=0.2),
// evaluated independently with mpmath at t = 10.
constexpr double kS10 = 2.0;
constexpr double kL10 = 1.29699707514508096;
constexpr double kM10 = 0.432332358381693654;
constexpr double kN10 = 0.864664716763387308;
constexpr double kGamma10 = 0.367879441171442322;

TEST_CASE("raised cosine schedule values") {
  const auto lam = RateSchedule::raised_cosine(0.3, 0.06, 50, 5);
  CHECK(lam.eval(10) == 0.3);
  CHECK(lam.eval(52.5) == doctest::Approx(0.18).epsilon(1e-15));
  CHECK(lam.eval(50) == 0.3);
  CHECK(lam.eval(55) == 0.06);
  const auto nu = RateSchedule::raised_cosine(0.2, 0.04, 50, 5);
  CHECK(nu.eval(55) == 0.04);
  CHECK_THROWS_AS(lam.eval(-1e-9), std::domain_error);

  double prev = lam.eval(50);
  for (double t = 50; t <= 55; t += 0.01) {
    const double v = lam.eval(t);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("instantaneous step") {
  const auto lam = RateSchedule::raised_cosine(0.3, 0.06, 50, 0);
  CHECK(lam.eval(49.999) == 0.3);
  CHECK(lam.eval(50) == 0.06);
  CHECK(lam.eval_left(50) == 0.3);
  CHECK(lam.integral(0, 60) == doctest::Approx(15 + 0.6));
  CHECK(lam.knots() == std::vector<double>{50});
}

TEST_CASE("schedule integral matches numerical quadrature") {
  const auto lam = presets::example_lambda();
  // midpoint rule on a fine grid as an independent check
  const int n = 200000;
  const double a = 40, b = 60, h = (b - a) / n;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += lam.eval(a + (i + 0.5) * h) * h;
  CHECK(lam.integral(a, b) == doctest::Approx(sum).epsilon(1e-9));

  const auto pc = RateSchedule::piecewise_constant({1, 3}, {0.5, 0.0, 2.0});
  CHECK(pc.integral(0, 4) == doctest::Approx(0.5 + 2.0));
  CHECK(pc.eval(1) == 0.0);
  CHECK(pc.eval_left(1) == 0.5);
  CHECK(pc.max_on(0.5, 2.0) == 0.5);
  CHECK(pc.max_on(2.0, 3.5) == 2.0);
  CHECK_THROWS(RateSchedule::piecewise_constant({1}, {1.0}));
}

TEST_CASE("model params validation") {
  auto p = presets::example_bdi();
  CHECK_NOTHROW(p.validate());
  p.fatality_rate = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = presets::example_bdi();
  p.horizon = 0;
  CHECK_THROWS_AS(IntegralTables::build(p), std::invalid_argument);
  p = presets::example_bdi();
  CHECK(p.immigration().eval(10) == doctest::Approx(0.2));
  CHECK(p.immigration().eval(55) == doctest::Approx(0.04));
  CHECK_THROWS(IntegralTables::build(presets::example_bdi(), 0.0));
  CHECK_THROWS(IntegralTables::build(presets::example_bdi(), 0.01, 0.0));
}

TEST_CASE("tables on the constant-rate prefix") {
  const auto tables = IntegralTables::build(presets::example_bdi());
  const auto r = tables.at(10);
  CHECK(r.s == doctest::Approx(kS10).epsilon(1e-12));
  CHECK(std::abs(r.L - kL10) < 1e-8);
  CHECK(std::abs(r.M - kM10) < 1e-8);
  CHECK(std::abs(r.N - kN10) < 1e-8);
  CHECK(std::abs(r.gamma - kGamma10) < 1e-12);
  CHECK(std::abs(r.Sigma - (1 - std::exp(-2.0)) / 0.2) < 1e-8);

  const auto z = tables.at(0);
  CHECK(z.s == 0);
  CHECK(z.L == 0);
  CHECK(z.M == 0);
  CHECK(z.N == 0);
  CHECK(z.Sigma == 0);
  CHECK(z.gamma == 1);

  // every grid point on [0, 50] against the closed forms
  double worst = 0;
  for (std::size_t i = 0; i < tables.grid().size() && tables.grid()[i] <= 50; ++i) {
    const auto row = tables.row(i);
    const double e = 1 - std::exp(-0.2 * row.t);
    worst = std::max({worst, std::abs(row.L - 1.5 * e), std::abs(row.M - 0.5 * e),
                      std::abs(row.N - e)});
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("identity L - M + e^-s = 1 on every grid point") {
  for (double d : {5.0, 0.0}) {
    const auto tables = IntegralTables::build(presets::example_bdi(350, d));
    CHECK(tables.identity_residual() <= 1e-8);
  }
}

TEST_CASE("knots are grid points and grid queries are exact") {
  const auto tables = IntegralTables::build(presets::example_bdi());
  const auto g = tables.grid();
  CHECK(std::binary_search(g.begin(), g.end(), 50.0));
  CHECK(std::binary_search(g.begin(), g.end(), 55.0));
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 350.0);
  for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] > g[i - 1]);
  for (std::size_t i : {std::size_t{0}, std::size_t{1234}, g.size() - 1}) {
    const auto q = tables.at(g[i]);
    const auto r = tables.row(i);
    CHECK(q.L == r.L);
    CHECK(q.M == r.M);
    CHECK(q.s == r.s);
  }
  CHECK_THROWS_AS(tables.at(-0.1), std::out_of_range);
  CHECK_THROWS_AS(tables.at(350.01), std::out_of_range);
}

TEST_CASE("monotone columns and gamma") {
  const auto tables = IntegralTables::build(presets::example_bdi(350, 0.0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 350);
  std::vector<double> ts(2000);
  for (auto& t : ts) t = u(rng);
  std::sort(ts.begin(), ts.end());
  TableRow prev = tables.at(0);
  for (double t : ts) {
    const auto r = tables.at(t);
    CHECK(r.L >= prev.L);
    CHECK(r.M >= prev.M);
    CHECK(r.N >= prev.N);
    CHECK(r.Sigma >= prev.Sigma);
    CHECK(r.gamma <= prev.gamma);
    CHECK(r.gamma > 0);
    CHECK(r.gamma <= 1);
    prev = r;
  }
}

TEST_CASE("halving the step changes table values by less than tol") {
  const auto p = presets::example_bdi();
  const auto coarse = IntegralTables::build(p, 0.02, 1e-9);
  const auto fine = IntegralTables::build(p, 0.01, 1e-9);
  double worst = 0;
  for (std::size_t i = 0; i < coarse.grid().size(); ++i) {
    const auto a = coarse.row(i);
    const auto b = fine.at(a.t);
    worst = std::max({worst, std::abs(a.L - b.L), std::abs(a.M - b.M), std::abs(a.N - b.N),
                      std::abs(a.Sigma - b.Sigma)});
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("interpolation between grid points is accurate") {
  const auto tables = IntegralTables::build(presets::example_bdi());
  for (double t : {0.005, 3.14159, 9.999, 27.3333}) {
    const auto r = tables.at(t);
    const double e = 1 - std::exp(-0.2 * t);
    CHECK(std::abs(r.L - 1.5 * e) < 1e-12);
    CHECK(std::abs(r.s - 0.2 * t) < 1e-12);
  }
}

TEST_CASE("extension past the horizon uses the settled closed form") {
  const auto short_tables = IntegralTables::build(presets::example_bdi(200));
  const auto long_tables = IntegralTables::build(presets::example_bdi(350));
  const auto a = short_tables.at_extended(300);
  const auto b = long_tables.at(300);
  CHECK(a.s == doctest::Approx(b.s).epsilon(1e-12));
  CHECK(a.L == doctest::Approx(b.L).epsilon(1e-10));
  CHECK(a.M == doctest::Approx(b.M).epsilon(1e-10));
  CHECK(a.N == doctest::Approx(b.N).epsilon(1e-10));
  CHECK(a.Sigma == doctest::Approx(b.Sigma).epsilon(1e-10));

  const auto unsettled = IntegralTables::build(presets::example_bdi(52));
  CHECK_THROWS_AS(unsettled.at_extended(60), std::domain_error);
}

TEST_CASE("build runtime for a 350-day horizon") {
  const auto start = std::chrono::steady_clock::now();
  const auto tables = IntegralTables::build(presets::example_bdi());
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  CHECK(dt.count() < 1.0);
  CHECK(tables.grid().size() == 35001);
}
