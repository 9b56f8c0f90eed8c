#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "savsddp/network.hpp"

namespace savsddp::sav {

struct OdEntry {
  int origin = 0, dest = 0;  // node indices
  double expected = 0.0;     // travelers
};

struct Departure {
  int k = 2;                // departure time step, >= 2
  int latest_arrival = 2;   // T^k, k < T^k <= T
  std::vector<OdEntry> od;
};

/// OD demand by departure time plus the booking split. The expected table is
/// class-agnostic: the pre-booked share of a cell is booking_rate * expected,
/// the on-demand share is the rest.
struct DemandSpec {
  int horizon = 2;  // T
  std::vector<Departure> departures;
  double booking_rate = 0.5;
  double noise_halfwidth = 0.2;
  bool dedicated = false;
  bool benchmark_blind = false;

  /// Booking rate actually used for splitting: zero in benchmark-blind mode,
  /// where the whole demand is revealed only at departure stages.
  double effective_booking_rate() const { return benchmark_blind ? 0.0 : booking_rate; }
  bool dedicated_enabled() const { return dedicated && !benchmark_blind; }

  void validate(const NetworkSpec& network) const;
};

struct Weights {
  double alpha_T = 1.0, alpha_D = 1.0, alpha_N = 1.0, alpha_C = 1.0;
  double alpha_P = 0.0;  // 0 requests the default 1000 * max of the others

  double resolved_alpha_P() const;
  void validate() const;
};

struct SavOptions {
  double rho = 3.0;          // vehicle carrying capacity
  int saa_samples = 20;      // realizations per stochastic stage
  std::uint64_t seed = 0;
};

struct PerformanceReport {
  double total_travel_time = 0.0;  // traveler-time-steps, riding + waiting
  double riding_time = 0.0;
  double waiting_time = 0.0;
  double total_distance = 0.0;     // vehicle-distance
  double fleet_size = 0.0;
  double infrastructure_cost = 0.0;
  double shortfall_penalty = 0.0;   // sum of P_s variables, unweighted
  double early_exit_penalty = 0.0;  // sum of P_i variables, unweighted
  double prebooked_travelers = 0.0;
  double ondemand_travelers = 0.0;
  double prebooked_time_per_traveler = 0.0;
  double ondemand_time_per_traveler = 0.0;

  double objective(const Weights& w) const {
    return w.alpha_T * total_travel_time + w.alpha_D * total_distance +
           w.alpha_N * fleet_size + w.alpha_C * infrastructure_cost +
           w.resolved_alpha_P() * (shortfall_penalty + early_exit_penalty);
  }
};

}  // namespace savsddp::sav
