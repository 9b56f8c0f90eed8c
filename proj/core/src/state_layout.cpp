#include "savsddp/state_layout.hpp"

#include <algorithm>

#include "savsddp/errors.hpp"

namespace savsddp::sav {

namespace {

std::uint64_t slot_key(SlotKind kind, int cls, int commodity, int entity, int lag,
                       int cell) {
  const std::uint64_t a = static_cast<std::uint32_t>(commodity >= 0 ? commodity : cell) & 0xffffff;
  const std::uint64_t b = static_cast<std::uint32_t>(entity) & 0xffffff;
  return (static_cast<std::uint64_t>(kind) << 60) |
         (static_cast<std::uint64_t>(cls + 1) << 56) |
         (static_cast<std::uint64_t>(lag) << 48) | (a << 24) | b;
}

}  // namespace

int StateLayout::find(int boundary, SlotKind kind, int cls, int commodity, int entity,
                      int lag, int cell) const {
  const auto& map = index_[boundary];
  auto it = map.find(slot_key(kind, cls, commodity, entity, lag, cell));
  return it == map.end() ? -1 : it->second;
}

std::string StateLayout::slot_name(const TimeExpandedNetwork& ten,
                                   const StateSlot& s) const {
  auto ent = [&](int e) { return ten.entity(e).name; };
  switch (s.kind) {
    case SlotKind::Capacity:
      return "mu[" + ent(s.entity) + "]";
    case SlotKind::VehicleFlow:
      return std::string(s.cls == kDedicated ? "x" : "xh") + "[" + ent(s.entity) +
             "]lag" + std::to_string(s.lag);
    case SlotKind::TravelerFlow:
      return std::string(s.cls == kPrebooked ? "y" : "yh") + "[c" +
             std::to_string(s.commodity) + "," + ent(s.entity) + "]lag" +
             std::to_string(s.lag);
    case SlotKind::CumulativeArrivals:
      return std::string(s.cls == kPrebooked ? "Q" : "Qh") + "[c" +
             std::to_string(s.commodity) + "]";
    case SlotKind::DemandMemory:
      return "xi[cell" + std::to_string(s.cell) + "]";
    case SlotKind::PrebookedTotal:
      return "xi_tot[c" + std::to_string(s.commodity) + "]";
    case SlotKind::OndemandTotal:
      return "xih_tot[c" + std::to_string(s.commodity) + "]";
    case SlotKind::Deployment:
      return std::string(s.cls == kDedicated ? "x0" : "xh0") + "[" +
             ten.spec().nodes[s.entity].id + "]";
  }
  return "?";
}

StateLayout build_state_layout(const TimeExpandedNetwork& ten, const DemandSpec& demand) {
  demand.validate(ten.spec());
  if (demand.horizon != ten.horizon())
    throw ValidationError("state layout: demand horizon " + std::to_string(demand.horizon) +
                          " does not match the network horizon " +
                          std::to_string(ten.horizon()));

  StateLayout layout;
  layout.rate_ = demand.effective_booking_rate();
  const double rate = layout.rate_;

  if (demand.dedicated_enabled()) layout.vclasses_ = {kDedicated, kNonDedicated};
  else layout.vclasses_ = {kNonDedicated};

  // Commodities are (k, dest) pairs with any positive demand; cells keep the
  // per-origin expectations. Order: departures as listed, then first
  // appearance of the destination.
  for (const Departure& dep : demand.departures) {
    for (const OdEntry& od : dep.od) {
      if (od.expected <= 0.0) continue;
      int ci = -1;
      for (size_t i = 0; i < layout.commodities_.size(); ++i) {
        if (layout.commodities_[i].k == dep.k && layout.commodities_[i].dest == od.dest) {
          ci = static_cast<int>(i);
          break;
        }
      }
      if (ci < 0) {
        ci = static_cast<int>(layout.commodities_.size());
        layout.commodities_.push_back({dep.k, dep.latest_arrival, od.dest, false, false});
      }
      Commodity& c = layout.commodities_[ci];
      if (rate * od.expected > 0.0) c.pre_active = true;
      if ((1.0 - rate) * od.expected > 0.0) c.on_active = true;
      layout.cells_.push_back({od.origin, od.dest, dep.k, od.expected, ci});
    }
  }

  const int T = ten.horizon();
  const int num_nodes = ten.num_nodes();
  layout.slots_.resize(T);
  layout.index_.resize(T);

  for (int t = 0; t < T; ++t) {
    auto& slots = layout.slots_[t];
    auto& index = layout.index_[t];
    auto add = [&](StateSlot s) {
      index[slot_key(s.kind, s.cls, s.commodity, s.entity, s.lag, s.cell)] =
          static_cast<int>(slots.size());
      slots.push_back(s);
    };

    for (int e = 0; e < ten.num_entities(); ++e)
      add({SlotKind::Capacity, -1, -1, e, 0, -1});

    // In-transit window: a flow departed at t-lag still moving after t.
    auto flow_window = [&](int e, int lag, int min_depart) {
      const int depart = t - lag;
      const int tt = ten.entity(e).travel_time;
      return lag >= 0 && lag < tt && depart >= min_depart && depart + tt <= T;
    };

    for (int vc : layout.vclasses_) {
      for (int e = 0; e < ten.num_entities(); ++e) {
        const int tt = ten.entity(e).travel_time;
        for (int lag = 0; lag < tt; ++lag) {
          if (flow_window(e, lag, 2)) add({SlotKind::VehicleFlow, vc, -1, e, lag, -1});
        }
      }
    }
    for (int tc : {kPrebooked, kOndemand}) {
      for (size_t ci = 0; ci < layout.commodities_.size(); ++ci) {
        const Commodity& c = layout.commodities_[ci];
        if (tc == kPrebooked ? !c.pre_active : !c.on_active) continue;
        for (int e = 0; e < ten.num_entities(); ++e) {
          const int tt = ten.entity(e).travel_time;
          for (int lag = 0; lag < tt; ++lag) {
            if (flow_window(e, lag, c.k))
              add({SlotKind::TravelerFlow, tc, static_cast<int>(ci), e, lag, -1});
          }
        }
      }
    }
    for (int tc : {kPrebooked, kOndemand}) {
      for (size_t ci = 0; ci < layout.commodities_.size(); ++ci) {
        const Commodity& c = layout.commodities_[ci];
        if (tc == kPrebooked ? !c.pre_active : !c.on_active) continue;
        if (c.k <= t) add({SlotKind::CumulativeArrivals, tc, static_cast<int>(ci), -1, 0, -1});
      }
    }
    if (t >= 1) {
      for (size_t li = 0; li < layout.cells_.size(); ++li) {
        const DemandCell& cell = layout.cells_[li];
        if (rate * cell.expected > 0.0 && cell.k > t)
          add({SlotKind::DemandMemory, -1, -1, -1, 0, static_cast<int>(li)});
      }
      for (size_t ci = 0; ci < layout.commodities_.size(); ++ci) {
        if (layout.commodities_[ci].pre_active)
          add({SlotKind::PrebookedTotal, -1, static_cast<int>(ci), -1, 0, -1});
      }
    }
    for (size_t ci = 0; ci < layout.commodities_.size(); ++ci) {
      const Commodity& c = layout.commodities_[ci];
      if (c.on_active && c.k <= t)
        add({SlotKind::OndemandTotal, -1, static_cast<int>(ci), -1, 0, -1});
    }
    if (t == 1) {
      for (int vc : layout.vclasses_) {
        for (int i = 0; i < num_nodes; ++i) add({SlotKind::Deployment, vc, -1, i, 0, -1});
      }
    }
  }
  return layout;
}

}  // namespace savsddp::sav
