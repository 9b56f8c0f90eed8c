#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "savsddp/demand.hpp"

namespace savsddp::scenario {

/// One sampled demand quantity for cell (origin, dest, departure k).
struct CellQuantity {
  int origin = 0, dest = 0, k = 0;
  double quantity = 0.0;
};

/// One realization of the demand observed at a stage: the full pre-booked
/// table at stage 1, the on-demand quantities of departure k at stage k.
struct NoiseRealization {
  int stage = 0;
  std::vector<CellQuantity> cells;
};

struct NoiseSet {
  int stage = 0;
  std::vector<NoiseRealization> realizations;  // equiprobable
};

/// Allocates a total expected demand over the active (origin, dest, k) cells
/// with a symmetric Dirichlet (all-ones) partition, seeded and reproducible.
/// The booking split is carried by the returned spec's booking_rate; the
/// per-cell table itself is class-agnostic.
sav::DemandSpec make_demand_spec(double total_expected, double booking_rate,
                                 const std::vector<std::pair<int, int>>& departures,
                                 const std::vector<std::pair<int, int>>& od_pairs,
                                 double halfwidth, int horizon, std::uint64_t seed);

/// Samples the SAA noise set for one stage. Stage 1 samples the pre-booked
/// table (every active cell, all departures); a stage k in the departure set
/// samples the on-demand quantities of departure k; every other stage gets a
/// single zero realization. Quantities are uniform on
/// [(1-h) * expected, (1+h) * expected]. Per-stage streams derive from the
/// master seed as stream(seed, stage), so stages sample independently and in
/// any order. A stage whose cells all have zero expectation collapses to a
/// single zero realization.
NoiseSet sample_noise(const sav::DemandSpec& spec, int stage, int count,
                      std::uint64_t seed);

/// Noise sets for every stage 0..horizon using the spec's sampling rules.
std::vector<NoiseSet> sample_all_noise(const sav::DemandSpec& spec, int count,
                                       std::uint64_t seed);

/// Audit export: stage,realization,origin,dest,quantity.
void write_noise_csv(const std::vector<NoiseSet>& sets, std::ostream& out);

}  // namespace savsddp::scenario
