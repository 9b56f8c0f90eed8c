#include "savsddp/demand.hpp"

#include <algorithm>
#include <cmath>

#include "savsddp/errors.hpp"

namespace savsddp::sav {

void DemandSpec::validate(const NetworkSpec& network) const {
  if (horizon < 2) throw ValidationError("demand: horizon must be at least 2");
  if (booking_rate < 0 || booking_rate > 1)
    throw ValidationError("demand: booking rate must lie in [0,1]");
  if (noise_halfwidth < 0 || noise_halfwidth > 1)
    throw ValidationError("demand: noise halfwidth must lie in [0,1]");
  const int n = static_cast<int>(network.nodes.size());
  std::vector<int> seen_k;
  for (const Departure& dep : departures) {
    if (dep.k < 2)
      throw ValidationError("demand: departure time " + std::to_string(dep.k) +
                            " must be >= 2");
    if (dep.k >= dep.latest_arrival || dep.latest_arrival > horizon)
      throw ValidationError("demand: departure " + std::to_string(dep.k) +
                            " needs k < latest_arrival <= horizon");
    if (std::find(seen_k.begin(), seen_k.end(), dep.k) != seen_k.end())
      throw ValidationError("demand: duplicate departure time " + std::to_string(dep.k));
    seen_k.push_back(dep.k);
    for (const OdEntry& od : dep.od) {
      if (od.origin < 0 || od.origin >= n || od.dest < 0 || od.dest >= n)
        throw ValidationError("demand: OD entry references a node out of range");
      if (od.origin == od.dest)
        throw ValidationError("demand: OD entry with origin == destination");
      if (od.expected < 0 || !std::isfinite(od.expected))
        throw ValidationError("demand: OD expectation must be a finite value >= 0");
    }
  }
}

double Weights::resolved_alpha_P() const {
  if (alpha_P > 0) return alpha_P;
  return 1000.0 * std::max({alpha_T, alpha_D, alpha_N, alpha_C});
}

void Weights::validate() const {
  if (alpha_T < 0 || alpha_D < 0 || alpha_N < 0 || alpha_C < 0 || alpha_P < 0)
    throw ValidationError("weights: all weights must be >= 0");
  const double m = std::max({alpha_T, alpha_D, alpha_N, alpha_C});
  if (alpha_P > 0 && alpha_P <= m)
    throw ValidationError("weights: alpha_P must exceed the largest objective weight");
  if (m <= 0) throw ValidationError("weights: at least one objective weight must be positive");
}

}  // namespace savsddp::sav
