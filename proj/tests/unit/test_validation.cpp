#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bdi/presets.hpp"
#include "bdi/validation.hpp"

using namespace bdi;

namespace {

constexpr double kBeta10 = 0.905514050251912270;
constexpr double kMean10 = 6.38905609893065023;

SimConfig config(ModelParams p, std::int64_t runs, std::vector<double> cps) {
  SimConfig c;
  c.params = std::move(p);
  c.n_runs = runs;
  c.checkpoints = std::move(cps);
  c.master_seed = 4242;
  return c;
}

const EnsembleSummary& bdi_at_10() {
  static const EnsembleSummary s = simulate_ensemble(config(presets::example_bdi(10), 10000, {10}));
  return s;
}

}  // namespace

TEST_CASE("empirical_pmf") {
  const std::vector<std::int64_t> zeros(50, 0);
  const auto z = empirical_pmf(zeros, 4);
  CHECK(z.p[0] == 1.0);
  CHECK(z.tail_mass == 0.0);
  const std::vector<std::int64_t> five{5};
  CHECK(empirical_pmf(five, 10).p[5] == 1.0);
  const auto over = empirical_pmf(five, 3);
  CHECK(over.tail_mass == 1.0);
  const std::vector<std::int64_t> unknown{-1, 2};
  CHECK(empirical_pmf(unknown, 3).p[2] == 1.0);

  const auto e = empirical_pmf(bdi_at_10(), 0, 100000);
  CHECK(e.t == 10.0);
  const std::vector<std::int64_t>& s = bdi_at_10().states[0];
  double var = 0;
  for (auto v : s) var += (static_cast<double>(v) - e.mean()) * (static_cast<double>(v) - e.mean());
  const double se = std::sqrt(var / (s.size() - 1) / s.size());
  CHECK(std::abs(e.mean() - kMean10) < 3 * se);
}

TEST_CASE("chi-square on exact counts") {
  PmfVector pmf;
  pmf.p = {0.25, 0.5, 0.25};
  const std::vector<double> counts{25, 50, 25};
  const auto rep = chi_square_gof(std::span<const double>(counts), pmf);
  CHECK(rep.applicable);
  CHECK(rep.statistic == doctest::Approx(0.0));
  CHECK(rep.p_value == doctest::Approx(1.0));
}

TEST_CASE("chi-square bins") {
  const auto nb = pmf_nbd(2.0 / 3.0, kBeta10, 400);
  const auto rep = chi_square_gof(bdi_at_10().states[0], nb, 10);
  double obs = 0;
  for (const auto& b : rep.bins) {
    CHECK(b.expected >= kMinExpected);
    obs += b.observed;
  }
  CHECK(obs == 10000.0);
  CHECK(rep.bins.front().k_lo == 0);
  CHECK(rep.bins.back().k_hi == -1);
  for (std::size_t i = 1; i < rep.bins.size(); ++i) CHECK(rep.bins[i].k_lo == rep.bins[i - 1].k_hi + 1);
  CHECK(rep.dof == static_cast<int>(rep.bins.size()) - 1);
  CHECK(rep.p_value > kSignificance);
}

TEST_CASE("chi-square under the null and against a wrong model") {
  const auto nb = pmf_nbd(1.5, 0.7, 300);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::int64_t> draws;
  for (int i = 0; i < 5000; ++i) {
    double x = u(rng), c = 0;
    std::int64_t k = 0;
    while (k < 300 && (c += nb.p[static_cast<std::size_t>(k)]) < x) ++k;
    draws.push_back(k);
  }
  CHECK(chi_square_gof(draws, nb).p_value > kSignificance);
  CHECK(chi_square_gof(draws, pmf_nbd(1.5, 0.6, 300)).p_value < 1e-6);
  CHECK(chi_square_gof(bdi_at_10().states[0], pmf_nbd(2.0 / 3.0, 0.85, 400)).p_value < 1e-6);
}

TEST_CASE("chi-square degenerate and small inputs") {
  PmfVector point;
  point.p = {1.0};
  const std::vector<std::int64_t> zeros(200, 0);
  CHECK_FALSE(chi_square_gof(zeros, point).applicable);
  const std::vector<std::int64_t> few(99, 0);
  CHECK_THROWS_AS(chi_square_gof(few, pmf_nbd(1, 0.5, 10)), std::invalid_argument);
}

TEST_CASE("moment checks") {
  // M/M/inf queue at t = 10
  const auto q = simulate_ensemble(config(presets::homogeneous(0, 0.1, 0.2, 0, 10), 20000, {10}));
  const auto mq = check_moments(q.states[0], 1.26424111765711536, 1.26424111765711536, 10);
  CHECK(mq.ok());
  CHECK(mq.empirical_mean == doctest::Approx(1.264241).epsilon(0.02));

  // deterministic: nothing happens
  const auto d = simulate_ensemble(config(presets::homogeneous(0, 0, 0, 7, 10), 10, {10}));
  const auto md = check_moments(d.states[0], 7, 0, 10);
  CHECK(md.ok());
  CHECK(md.empirical_variance == 0.0);
  CHECK_FALSE(check_moments(d.states[0], 7.5, 0, 10).mean_ok);

  const std::vector<std::int64_t> with_unknown{1, 2, -1, 3};
  CHECK_FALSE(check_moments(with_unknown, 2, 1).ok());

  // BD flat-region cv
  const auto bd = presets::example_bd(40);
  const auto s = simulate_ensemble(config(bd, 10000, {40}));
  const auto m = check_moments(s.states[0], 0, 0, 40);
  CHECK(std::sqrt(m.empirical_variance) / m.empirical_mean == doctest::Approx(1.414).epsilon(0.10));

  const auto tb = IntegralTables::build(presets::example_bdi(10));
  const std::vector<MomentReport> an{moments_bdi0(tb, 10, 2.0 / 3.0)};
  const auto checks = validate_moments(bdi_at_10(), an);
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].ok());
}
