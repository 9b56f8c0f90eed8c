#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "savsddp/demand.hpp"
#include "savsddp/network.hpp"

namespace savsddp::sav {

// Vehicle classes.
inline constexpr int kDedicated = 0;
inline constexpr int kNonDedicated = 1;
// Traveler classes.
inline constexpr int kPrebooked = 0;
inline constexpr int kOndemand = 1;

enum class SlotKind : std::uint8_t {
  Capacity,            // mu per entity
  VehicleFlow,         // in-transit or waiting vehicles, per class
  TravelerFlow,        // in-transit or waiting travelers, per class and commodity
  CumulativeArrivals,  // Q per class and commodity
  DemandMemory,        // observed pre-booked cell, carried until consumed at k
  PrebookedTotal,      // sum over origins of a commodity's pre-booked demand
  OndemandTotal,       // realized on-demand total, recorded at stage k
  Deployment,          // stage-1 fleet deployment per class and node
};

struct StateSlot {
  SlotKind kind = SlotKind::Capacity;
  int cls = -1;        // vehicle or traveler class, -1 where not applicable
  int commodity = -1;  // index into StateLayout::commodities()
  int entity = -1;     // entity index (flows, capacity) or node (deployment)
  int lag = 0;         // steps since departure for in-transit flows
  int cell = -1;       // index into StateLayout::cells()
};

/// A (departure k, destination s) traveler commodity; flows and cumulative
/// arrivals are tracked at this granularity for each traveler class.
struct Commodity {
  int k = 0;
  int latest_arrival = 0;
  int dest = 0;
  bool pre_active = false;
  bool on_active = false;
};

/// An (origin, dest, departure) demand cell with positive expectation.
struct DemandCell {
  int origin = 0, dest = 0, k = 0;
  double expected = 0.0;
  int commodity = -1;
};

/// Deterministic enumeration of the state carried across each stage boundary.
/// Boundary t holds the slots passed from stage t to stage t+1, for
/// t = 0..horizon-1. Slot order is fixed: capacities, vehicle flows (dedicated
/// class first when enabled), traveler flows (pre-booked then on-demand),
/// cumulative arrivals, demand memory, pre-booked totals, on-demand totals,
/// deployments.
class StateLayout {
 public:
  int num_boundaries() const { return static_cast<int>(slots_.size()); }
  const std::vector<StateSlot>& slots(int boundary) const { return slots_[boundary]; }
  int dim(int boundary) const { return static_cast<int>(slots_[boundary].size()); }

  /// Slot position at a boundary, -1 if absent. Arguments not applicable to
  /// the kind must be -1/0 as in StateSlot defaults.
  int find(int boundary, SlotKind kind, int cls, int commodity, int entity, int lag,
           int cell) const;

  const std::vector<Commodity>& commodities() const { return commodities_; }
  const std::vector<DemandCell>& cells() const { return cells_; }
  const std::vector<int>& vehicle_classes() const { return vclasses_; }

  double effective_booking_rate() const { return rate_; }
  std::string slot_name(const TimeExpandedNetwork& ten, const StateSlot& s) const;

 private:
  friend StateLayout build_state_layout(const TimeExpandedNetwork&, const DemandSpec&);
  std::vector<std::vector<StateSlot>> slots_;
  std::vector<std::unordered_map<std::uint64_t, int>> index_;
  std::vector<Commodity> commodities_;
  std::vector<DemandCell> cells_;
  std::vector<int> vclasses_;
  double rate_ = 0.0;
};

StateLayout build_state_layout(const TimeExpandedNetwork& ten, const DemandSpec& demand);

}  // namespace savsddp::sav
