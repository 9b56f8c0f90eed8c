#pragma once

#include "savsddp/sav_compiler.hpp"

namespace savsddp::testing {

/// Two nodes A and B linked both ways, unit travel times and costs, horizon 6,
/// one OD pair A->B with expected demand 2 departing at k = 2 (latest arrival
/// 5), carrying capacity 1, all demand on-demand. Hand analysis: deploy two
/// vehicles at A, drive both to B at t = 2 carrying both travelers, park them
/// at B until the horizon ends. Optimum 10 = T(2) + D(2) + N(2) + C(4).
inline sav::SavInputs toy2_inputs() {
  sav::SavInputs in;
  in.network.nodes = {{"A", 1.0, 0.0, 10.0}, {"B", 1.0, 0.0, 10.0}};
  in.network.links = {{"A", "B", 1, 1.0, 1.0, 0.0, 10.0},
                      {"B", "A", 1, 1.0, 1.0, 0.0, 10.0}};
  in.demand.horizon = 6;
  in.demand.booking_rate = 0.0;
  in.demand.noise_halfwidth = 0.0;
  in.demand.departures = {{2, 5, {{0, 1, 2.0}}}};
  in.weights = {1.0, 1.0, 1.0, 1.0, 100.0};
  in.options.rho = 1.0;
  in.options.saa_samples = 1;
  in.options.seed = 0;
  return in;
}

/// Same network, but the on-demand quantity is 1 or 3 with equal probability.
inline std::vector<scenario::NoiseSet> toy2_two_scenario_noise() {
  std::vector<scenario::NoiseSet> sets(7);
  for (int t = 0; t <= 6; ++t) {
    sets[t].stage = t;
    sets[t].realizations = {{t, {}}};
  }
  sets[2].realizations = {{2, {{0, 1, 2, 1.0}}}, {2, {{0, 1, 2, 3.0}}}};
  return sets;
}

/// Pre-booked twin of toy-2: the same demand fully revealed at stage 1.
inline sav::SavInputs toy2_prebooked_inputs(bool dedicated) {
  sav::SavInputs in = toy2_inputs();
  in.demand.booking_rate = 1.0;
  in.demand.dedicated = dedicated;
  return in;
}

}  // namespace savsddp::testing
