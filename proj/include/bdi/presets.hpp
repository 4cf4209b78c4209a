#pragma once

#include "bdi/rate_model.hpp"

// The running example: lambda drops from 0.3 to 0.06 over [50, 55), mu is
// held at 0.1 and immigration follows lambda with ratio 2/3 (0.2 -> 0.04).
namespace bdi::presets {

inline RateSchedule example_lambda(double d = 5.0) {
  return RateSchedule::raised_cosine(0.3, 0.06, 50.0, d);
}

inline ModelParams example_bdi(double horizon = 350.0, double d = 5.0) {
  ModelParams p;
  p.lambda = example_lambda(d);
  p.mu = RateSchedule::constant(0.1);
  p.nu = ProportionalImmigration{2.0 / 3.0};
  p.initial_infected = 0;
  p.fatality_rate = 0.02;
  p.horizon = horizon;
  return p;
}

inline ModelParams example_bd(double horizon = 350.0, double d = 5.0) {
  ModelParams p = example_bdi(horizon, d);
  p.nu = ProportionalImmigration{0.0};
  p.initial_infected = 1;
  return p;
}

inline ModelParams homogeneous(double lambda, double mu, double nu, std::int64_t i0,
                               double horizon) {
  ModelParams p;
  p.lambda = RateSchedule::constant(lambda);
  p.mu = RateSchedule::constant(mu);
  p.nu = RateSchedule::constant(nu);
  p.initial_infected = i0;
  p.fatality_rate = 0.0;
  p.horizon = horizon;
  return p;
}

}  // namespace bdi::presets
