#include "savsddp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "savsddp/csv.hpp"
#include "savsddp/errors.hpp"
#include "savsddp/rng.hpp"

namespace savsddp::scenario {

namespace {

struct Cell {
  int origin, dest, k;
  double expected;
};

/// Active cells in deterministic (departure, od) order.
std::vector<Cell> active_cells(const sav::DemandSpec& spec) {
  std::vector<Cell> cells;
  for (const sav::Departure& dep : spec.departures) {
    for (const sav::OdEntry& od : dep.od) {
      if (od.expected > 0.0) cells.push_back({od.origin, od.dest, dep.k, od.expected});
    }
  }
  return cells;
}

}  // namespace

sav::DemandSpec make_demand_spec(double total_expected, double booking_rate,
                                 const std::vector<std::pair<int, int>>& departures,
                                 const std::vector<std::pair<int, int>>& od_pairs,
                                 double halfwidth, int horizon, std::uint64_t seed) {
  if (total_expected < 0) throw ValidationError("make_demand_spec: negative total demand");
  if (booking_rate < 0 || booking_rate > 1)
    throw ValidationError("make_demand_spec: booking rate must lie in [0,1]");
  if (od_pairs.empty() && total_expected > 0)
    throw ValidationError("make_demand_spec: positive demand but no OD pairs");

  sav::DemandSpec spec;
  spec.horizon = horizon;
  spec.booking_rate = booking_rate;
  spec.noise_halfwidth = halfwidth;

  // Symmetric Dirichlet over all (departure, od) cells: normalized
  // exponentials, drawn in a fixed order.
  Rng rng(seed);
  std::vector<double> shares;
  shares.reserve(departures.size() * od_pairs.size());
  double sum = 0.0;
  for (size_t d = 0; d < departures.size(); ++d) {
    for (size_t o = 0; o < od_pairs.size(); ++o) {
      const double e = rng.exponential();
      shares.push_back(e);
      sum += e;
    }
  }

  size_t idx = 0;
  for (const auto& [k, latest] : departures) {
    sav::Departure dep;
    dep.k = k;
    dep.latest_arrival = latest;
    for (const auto& [r, s] : od_pairs) {
      const double share = sum > 0 ? shares[idx] / sum : 0.0;
      ++idx;
      dep.od.push_back({r, s, share * total_expected});
    }
    spec.departures.push_back(std::move(dep));
  }
  return spec;
}

NoiseSet sample_noise(const sav::DemandSpec& spec, int stage, int count,
                      std::uint64_t seed) {
  if (count < 1) throw ValidationError("sample_noise: count must be >= 1");
  const double rate = spec.effective_booking_rate();
  const double h = spec.noise_halfwidth;

  NoiseSet set;
  set.stage = stage;

  // Cells and their expected value for the class observed at this stage.
  std::vector<Cell> cells;
  if (stage == 1) {
    for (Cell c : active_cells(spec)) {
      c.expected *= rate;
      if (c.expected > 0.0) cells.push_back(c);
    }
  } else {
    for (Cell c : active_cells(spec)) {
      if (c.k != stage) continue;
      c.expected *= (1.0 - rate);
      if (c.expected > 0.0) cells.push_back(c);
    }
  }

  if (cells.empty()) {
    set.realizations.push_back({stage, {}});
    return set;
  }

  Rng stream = Rng(seed).stream(static_cast<std::uint64_t>(stage));
  for (int n = 0; n < count; ++n) {
    NoiseRealization real;
    real.stage = stage;
    for (const Cell& c : cells) {
      const double q = stream.uniform((1.0 - h) * c.expected, (1.0 + h) * c.expected);
      real.cells.push_back({c.origin, c.dest, c.k, q});
    }
    set.realizations.push_back(std::move(real));
  }
  return set;
}

std::vector<NoiseSet> sample_all_noise(const sav::DemandSpec& spec, int count,
                                       std::uint64_t seed) {
  std::vector<NoiseSet> sets;
  sets.reserve(spec.horizon + 1);
  for (int t = 0; t <= spec.horizon; ++t) {
    if (t == 0) {
      sets.push_back({0, {{0, {}}}});
    } else {
      sets.push_back(sample_noise(spec, t, count, seed));
    }
  }
  return sets;
}

void write_noise_csv(const std::vector<NoiseSet>& sets, std::ostream& out) {
  out << "stage,realization,origin,dest,quantity\n";
  for (const NoiseSet& set : sets) {
    for (size_t n = 0; n < set.realizations.size(); ++n) {
      for (const CellQuantity& c : set.realizations[n].cells) {
        out << set.stage << ',' << n << ',' << c.origin << ',' << c.dest << ','
            << format_double(c.quantity) << '\n';
      }
    }
  }
}

}  // namespace savsddp::scenario
