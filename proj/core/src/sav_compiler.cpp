#include "savsddp/sav_compiler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "savsddp/errors.hpp"

namespace savsddp::sav {

namespace {

struct StageBuilder {
  msslp::StageTemplate st;

  int var(double lo, double up, double cost, std::string name) {
    st.lower.push_back(lo);
    st.upper.push_back(up);
    st.cost.push_back(cost);
    st.var_names.push_back(std::move(name));
    return st.var_count++;
  }

  int row(std::string id, std::vector<std::pair<int, double>> own,
          std::vector<std::pair<int, double>> state, double rhs) {
    st.rows.push_back({std::move(id), std::move(own), std::move(state), rhs});
    return static_cast<int>(st.rows.size()) - 1;
  }
};

}  // namespace

SavModel compile_sav_problem(const SavInputs& in,
                             const std::vector<scenario::NoiseSet>& scenarios) {
  in.network.validate();
  in.demand.validate(in.network);
  in.weights.validate();
  if (in.options.rho <= 0) throw ValidationError("options: rho must be positive");

  SavModel model;
  model.network = build_network(in.network, in.demand.horizon);
  model.demand = in.demand;
  model.weights = in.weights;
  model.options = in.options;
  model.layout = build_state_layout(model.network, in.demand);
  model.noise = scenarios;

  const TimeExpandedNetwork& ten = model.network;
  const StateLayout& layout = model.layout;
  const int T = ten.horizon();
  const int S = T + 1;
  const int num_nodes = ten.num_nodes();
  const int num_entities = ten.num_entities();
  const auto& commodities = layout.commodities();
  const int nc = static_cast<int>(commodities.size());
  const auto& cells = layout.cells();
  const double alpha_P = in.weights.resolved_alpha_P();
  const double rho = in.options.rho;

  if (static_cast<int>(scenarios.size()) != S)
    throw ValidationError("compile: expected " + std::to_string(S) +
                          " scenario sets, got " + std::to_string(scenarios.size()));

  // (origin, dest, k) -> cell index, for mapping demand draws onto rows.
  std::map<std::tuple<int, int, int>, int> cell_lookup;
  for (size_t i = 0; i < cells.size(); ++i)
    cell_lookup[{cells[i].origin, cells[i].dest, cells[i].k}] = static_cast<int>(i);

  auto class_active = [&](int tc, int c) {
    return tc == kPrebooked ? commodities[c].pre_active : commodities[c].on_active;
  };

  model.problem.stages.resize(S);
  model.problem.noise.resize(S);
  model.problem.theta_floor = 0.0;
  model.vars.resize(S);

  for (int t = 0; t < S; ++t) {
    StageBuilder b;
    b.st.stage = t;
    b.st.state_in_dim = t == 0 ? 0 : layout.dim(t - 1);
    StageVarMap& vm = model.vars[t];
    vm.mu.assign(num_entities, -1);
    for (int vc : {0, 1}) {
      vm.veh[vc].assign(num_entities, -1);
      vm.veh_exit[vc].assign(num_nodes, -1);
      vm.deploy[vc].assign(num_nodes, -1);
      vm.trav[vc].assign(nc, std::vector<int>(num_entities, -1));
      vm.trav_exit[vc].assign(nc, std::vector<int>(num_nodes, -1));
      vm.cum[vc].assign(nc, -1);
    }
    vm.riders.assign(nc, std::vector<int>(num_entities, -1));
    vm.shortfall.assign(nc, -1);
    vm.exit_penalty.assign(num_nodes, -1);
    vm.memory.assign(cells.size(), -1);
    vm.pre_total.assign(nc, -1);
    vm.on_total.assign(nc, -1);

    msslp::NoiseSet stage_noise;
    stage_noise.stage = t;

    if (t == 0) {
      // Infrastructure: capacities within their allowable range, cost
      // alpha_C * unit expansion cost.
      for (int e = 0; e < num_entities; ++e) {
        const Entity& ent = ten.entity(e);
        vm.mu[e] = b.var(ent.cap_min, ent.cap_max, in.weights.alpha_C * ent.unit_cost,
                         "mu0[" + ent.name + "]");
      }
      for (const StateSlot& slot : layout.slots(0)) b.st.state_out.push_back(vm.mu[slot.entity]);
      stage_noise.realizations.push_back({});
    } else if (t == 1) {
      // Fleet sizing: deployments cost alpha_N each; the observed pre-booked
      // table lands in memory variables and per-commodity totals.
      for (int e = 0; e < num_entities; ++e)
        vm.mu[e] = b.var(0.0, lp::kInf, 0.0, "mu1[" + ten.entity(e).name + "]");
      for (int vc : layout.vehicle_classes()) {
        for (int i = 0; i < num_nodes; ++i) {
          vm.deploy[vc][i] = b.var(0.0, lp::kInf, in.weights.alpha_N,
                                   std::string(vc == kDedicated ? "x0[" : "xh0[") +
                                       in.network.nodes[i].id + "]");
        }
      }
      std::vector<int> mem_row(cells.size(), -1);
      for (size_t li = 0; li < cells.size(); ++li) {
        if (layout.effective_booking_rate() * cells[li].expected > 0.0)
          vm.memory[li] = b.var(0.0, lp::kInf, 0.0, "xi[" + std::to_string(li) + "]");
      }
      for (int c = 0; c < nc; ++c) {
        if (commodities[c].pre_active)
          vm.pre_total[c] = b.var(0.0, lp::kInf, 0.0, "xi_tot[" + std::to_string(c) + "]");
      }

      for (int e = 0; e < num_entities; ++e) {
        const int slot = layout.find(0, SlotKind::Capacity, -1, -1, e, 0, -1);
        b.row("prox[" + ten.entity(e).name + "]", {{vm.mu[e], 1.0}}, {{slot, -1.0}}, 0.0);
      }
      for (size_t li = 0; li < cells.size(); ++li) {
        if (vm.memory[li] >= 0)
          mem_row[li] = b.row("xirec[" + std::to_string(li) + "]",
                              {{vm.memory[li], 1.0}}, {}, 0.0);
      }
      for (int c = 0; c < nc; ++c) {
        if (vm.pre_total[c] < 0) continue;
        std::vector<std::pair<int, double>> own{{vm.pre_total[c], 1.0}};
        for (size_t li = 0; li < cells.size(); ++li) {
          if (cells[li].commodity == c && vm.memory[li] >= 0)
            own.emplace_back(vm.memory[li], -1.0);
        }
        b.row("xitot[" + std::to_string(c) + "]", std::move(own), {}, 0.0);
      }

      for (const StateSlot& slot : layout.slots(1)) {
        switch (slot.kind) {
          case SlotKind::Capacity: b.st.state_out.push_back(vm.mu[slot.entity]); break;
          case SlotKind::DemandMemory: b.st.state_out.push_back(vm.memory[slot.cell]); break;
          case SlotKind::PrebookedTotal:
            b.st.state_out.push_back(vm.pre_total[slot.commodity]);
            break;
          case SlotKind::Deployment:
            b.st.state_out.push_back(vm.deploy[slot.cls][slot.entity]);
            break;
          default:
            throw std::logic_error("unexpected slot kind at boundary 1");
        }
      }

      for (const scenario::NoiseRealization& real : scenarios[1].realizations) {
        msslp::NoiseRealization nr;
        for (const scenario::CellQuantity& q : real.cells) {
          auto it = cell_lookup.find({q.origin, q.dest, q.k});
          if (it == cell_lookup.end() || mem_row[it->second] < 0)
            throw ValidationError("scenario: stage-1 cell (" + std::to_string(q.origin) +
                                  "," + std::to_string(q.dest) + ",k=" +
                                  std::to_string(q.k) + ") is not a pre-booked cell");
          if (q.quantity != 0.0) nr.rhs_delta.emplace_back(mem_row[it->second], q.quantity);
        }
        stage_noise.realizations.push_back(std::move(nr));
      }
    } else {
      // Operations at time step t. mu variables exist whenever capacity rows
      // or the outgoing state need them; at t == T neither does.
      if (t < T) {
        for (int e = 0; e < num_entities; ++e)
          vm.mu[e] = b.var(0.0, lp::kInf, 0.0,
                           "mu" + std::to_string(t) + "[" + ten.entity(e).name + "]");
      }
      for (int vc : layout.vehicle_classes()) {
        const char* tag = vc == kDedicated ? "x" : "xh";
        for (int e = 0; e < num_entities; ++e) {
          if (!ten.arc_exists(e, t)) continue;
          const Entity& ent = ten.entity(e);
          const double cost = ent.is_node ? 0.0 : in.weights.alpha_D * ent.length;
          vm.veh[vc][e] = b.var(0.0, lp::kInf, cost, std::string(tag) + "[" + ent.name + "]");
        }
        for (int i = 0; i < num_nodes; ++i) {
          vm.veh_exit[vc][i] =
              b.var(0.0, lp::kInf, 0.0,
                    std::string(tag) + "exit[" + in.network.nodes[i].id + "]");
        }
      }
      for (int tc : {kPrebooked, kOndemand}) {
        const char* tag = tc == kPrebooked ? "y" : "yh";
        for (int c = 0; c < nc; ++c) {
          if (!class_active(tc, c) || commodities[c].k > t) continue;
          for (int e = 0; e < num_entities; ++e) {
            if (!ten.arc_exists(e, t)) continue;
            const Entity& ent = ten.entity(e);
            vm.trav[tc][c][e] =
                b.var(0.0, lp::kInf, in.weights.alpha_T * ent.travel_time,
                      std::string(tag) + std::to_string(c) + "[" + ent.name + "]");
          }
          for (int i = 0; i < num_nodes; ++i) {
            vm.trav_exit[tc][c][i] =
                b.var(0.0, lp::kInf, 0.0,
                      std::string(tag) + std::to_string(c) + "exit[" +
                          in.network.nodes[i].id + "]");
          }
        }
      }
      if (in.demand.dedicated_enabled()) {
        for (int c = 0; c < nc; ++c) {
          if (!commodities[c].pre_active || commodities[c].k > t) continue;
          for (int e = 0; e < num_entities; ++e) {
            if (ten.entity(e).is_node || !ten.arc_exists(e, t)) continue;
            vm.riders[c][e] = b.var(0.0, lp::kInf, 0.0,
                                    "Y" + std::to_string(c) + "[" + ten.entity(e).name + "]");
          }
        }
      }
      for (int tc : {kPrebooked, kOndemand}) {
        for (int c = 0; c < nc; ++c) {
          if (!class_active(tc, c) || commodities[c].k > t) continue;
          vm.cum[tc][c] = b.var(0.0, lp::kInf, 0.0,
                                std::string(tc == kPrebooked ? "Q" : "Qh") +
                                    std::to_string(c));
        }
      }
      for (int c = 0; c < nc; ++c) {
        if (t >= commodities[c].latest_arrival)
          vm.shortfall[c] = b.var(0.0, lp::kInf, alpha_P, "Ps" + std::to_string(c));
      }
      if (t < T) {
        for (int i = 0; i < num_nodes; ++i)
          vm.exit_penalty[i] =
              b.var(0.0, lp::kInf, alpha_P, "Pi[" + in.network.nodes[i].id + "]");
      }

      // Copy variables for everything the boundary carries that is not a
      // fresh decision of this stage.
      std::vector<int> slot_var;
      if (t < T) {
        const auto& out_slots = layout.slots(t);
        slot_var.assign(out_slots.size(), -1);
        for (size_t si = 0; si < out_slots.size(); ++si) {
          const StateSlot& s = out_slots[si];
          switch (s.kind) {
            case SlotKind::Capacity: slot_var[si] = vm.mu[s.entity]; break;
            case SlotKind::VehicleFlow:
              slot_var[si] = s.lag == 0
                                 ? vm.veh[s.cls][s.entity]
                                 : b.var(0.0, lp::kInf, 0.0, "xcarry");
              break;
            case SlotKind::TravelerFlow:
              slot_var[si] = s.lag == 0
                                 ? vm.trav[s.cls][s.commodity][s.entity]
                                 : b.var(0.0, lp::kInf, 0.0, "ycarry");
              break;
            case SlotKind::CumulativeArrivals:
              slot_var[si] = vm.cum[s.cls][s.commodity];
              break;
            case SlotKind::DemandMemory:
              vm.memory[s.cell] = b.var(0.0, lp::kInf, 0.0, "xicarry");
              slot_var[si] = vm.memory[s.cell];
              break;
            case SlotKind::PrebookedTotal:
              vm.pre_total[s.commodity] = b.var(0.0, lp::kInf, 0.0, "xitotcarry");
              slot_var[si] = vm.pre_total[s.commodity];
              break;
            case SlotKind::OndemandTotal:
              vm.on_total[s.commodity] = b.var(0.0, lp::kInf, 0.0, "xihtot");
              slot_var[si] = vm.on_total[s.commodity];
              break;
            case SlotKind::Deployment:
              throw std::logic_error("deployment slot outside boundary 1");
          }
          if (slot_var[si] < 0) throw std::logic_error("state slot without a variable");
        }
      }

      // Rows. Capacity proxies first.
      if (t < T) {
        for (int e = 0; e < num_entities; ++e) {
          const int slot = layout.find(t - 1, SlotKind::Capacity, -1, -1, e, 0, -1);
          b.row("prox[" + ten.entity(e).name + "]", {{vm.mu[e], 1.0}}, {{slot, -1.0}},
                0.0);
        }
      }

      // Vehicle conservation: outflows equal arriving in-transit flows plus
      // (at t == 2) the stage-1 deployments.
      for (int vc : layout.vehicle_classes()) {
        for (int i = 0; i < num_nodes; ++i) {
          std::vector<std::pair<int, double>> own;
          std::vector<std::pair<int, double>> state;
          for (int e = 0; e < num_entities; ++e) {
            const Entity& ent = ten.entity(e);
            if (ent.tail == i && vm.veh[vc][e] >= 0) own.emplace_back(vm.veh[vc][e], 1.0);
          }
          own.emplace_back(vm.veh_exit[vc][i], 1.0);
          for (int e = 0; e < num_entities; ++e) {
            const Entity& ent = ten.entity(e);
            if (ent.head != i) continue;
            const int slot = layout.find(t - 1, SlotKind::VehicleFlow, vc, -1, e,
                                         ent.travel_time - 1, -1);
            if (slot >= 0) state.emplace_back(slot, -1.0);
          }
          if (t == 2) {
            const int slot = layout.find(1, SlotKind::Deployment, vc, -1, i, 0, -1);
            if (slot >= 0) state.emplace_back(slot, -1.0);
          }
          b.row(std::string(vc == kDedicated ? "xcons[" : "xhcons[") +
                    in.network.nodes[i].id + "]",
                std::move(own), std::move(state), 0.0);
        }
      }

      // Traveler conservation; pre-booked entries arrive through memory
      // slots, on-demand entries through the stage's noise.
      std::array<std::vector<std::vector<int>>, 2> cons_row;
      cons_row[0].assign(nc, std::vector<int>(num_nodes, -1));
      cons_row[1].assign(nc, std::vector<int>(num_nodes, -1));
      for (int tc : {kPrebooked, kOndemand}) {
        for (int c = 0; c < nc; ++c) {
          if (!class_active(tc, c) || commodities[c].k > t) continue;
          for (int i = 0; i < num_nodes; ++i) {
            std::vector<std::pair<int, double>> own;
            std::vector<std::pair<int, double>> state;
            for (int e = 0; e < num_entities; ++e) {
              if (ten.entity(e).tail == i && vm.trav[tc][c][e] >= 0)
                own.emplace_back(vm.trav[tc][c][e], 1.0);
            }
            own.emplace_back(vm.trav_exit[tc][c][i], 1.0);
            for (int e = 0; e < num_entities; ++e) {
              const Entity& ent = ten.entity(e);
              if (ent.head != i) continue;
              const int slot = layout.find(t - 1, SlotKind::TravelerFlow, tc, c, e,
                                           ent.travel_time - 1, -1);
              if (slot >= 0) state.emplace_back(slot, -1.0);
            }
            if (tc == kPrebooked && commodities[c].k == t) {
              for (size_t li = 0; li < cells.size(); ++li) {
                if (cells[li].commodity != c || cells[li].origin != i) continue;
                const int slot =
                    layout.find(t - 1, SlotKind::DemandMemory, -1, -1, -1, 0,
                                static_cast<int>(li));
                if (slot >= 0) state.emplace_back(slot, -1.0);
              }
            }
            cons_row[tc][c][i] =
                b.row(std::string(tc == kPrebooked ? "ycons" : "yhcons") +
                          std::to_string(c) + "[" + in.network.nodes[i].id + "]",
                      std::move(own), std::move(state), 0.0);
          }
        }
      }

      // Cumulative arrivals: only the destination exit counts as an arrival.
      for (int tc : {kPrebooked, kOndemand}) {
        for (int c = 0; c < nc; ++c) {
          if (vm.cum[tc][c] < 0) continue;
          std::vector<std::pair<int, double>> own{
              {vm.cum[tc][c], 1.0}, {vm.trav_exit[tc][c][commodities[c].dest], -1.0}};
          std::vector<std::pair<int, double>> state;
          const int slot =
              layout.find(t - 1, SlotKind::CumulativeArrivals, tc, c, -1, 0, -1);
          if (slot >= 0) state.emplace_back(slot, -1.0);
          b.row(std::string(tc == kPrebooked ? "qtr" : "qhtr") + std::to_string(c),
                std::move(own), std::move(state), 0.0);
        }
      }

      // Traffic capacity: combined vehicle flow per entity, travelers exempt.
      if (t < T) {
        for (int e = 0; e < num_entities; ++e) {
          if (!ten.arc_exists(e, t)) continue;
          std::vector<std::pair<int, double>> own;
          for (int vc : layout.vehicle_classes()) {
            if (vm.veh[vc][e] >= 0) own.emplace_back(vm.veh[vc][e], 1.0);
          }
          if (own.empty()) continue;
          own.emplace_back(vm.mu[e], -1.0);
          own.emplace_back(b.var(0.0, lp::kInf, 0.0, "s_cap"), 1.0);
          b.row("cap[" + ten.entity(e).name + "]", std::move(own), {}, 0.0);
        }
      }

      // Carrying capacity on movement arcs: dedicated vehicles admit only
      // their riders, everyone else shares the non-dedicated fleet.
      for (int e = 0; e < num_entities; ++e) {
        if (ten.entity(e).is_node || !ten.arc_exists(e, t)) continue;
        if (in.demand.dedicated_enabled() && vm.veh[kDedicated][e] >= 0) {
          std::vector<std::pair<int, double>> own;
          for (int c = 0; c < nc; ++c) {
            if (vm.riders[c][e] >= 0) own.emplace_back(vm.riders[c][e], 1.0);
          }
          if (!own.empty()) {
            own.emplace_back(vm.veh[kDedicated][e], -rho);
            own.emplace_back(b.var(0.0, lp::kInf, 0.0, "s_ded"), 1.0);
            b.row("carry_ded[" + ten.entity(e).name + "]", std::move(own), {}, 0.0);
          }
        }
        std::vector<std::pair<int, double>> own;
        for (int c = 0; c < nc; ++c) {
          if (vm.trav[kPrebooked][c][e] >= 0) own.emplace_back(vm.trav[kPrebooked][c][e], 1.0);
          if (vm.riders[c][e] >= 0) own.emplace_back(vm.riders[c][e], -1.0);
          if (vm.trav[kOndemand][c][e] >= 0) own.emplace_back(vm.trav[kOndemand][c][e], 1.0);
        }
        if (!own.empty() && vm.veh[kNonDedicated][e] >= 0) {
          own.emplace_back(vm.veh[kNonDedicated][e], -rho);
          own.emplace_back(b.var(0.0, lp::kInf, 0.0, "s_carry"), 1.0);
          b.row("carry[" + ten.entity(e).name + "]", std::move(own), {}, 0.0);
        }
      }

      // Riders never exceed the pre-booked flow on the same arc.
      for (int c = 0; c < nc; ++c) {
        for (int e = 0; e < num_entities; ++e) {
          if (vm.riders[c][e] < 0) continue;
          b.row("ride" + std::to_string(c) + "[" + ten.entity(e).name + "]",
                {{vm.riders[c][e], 1.0},
                 {vm.trav[kPrebooked][c][e], -1.0},
                 {b.var(0.0, lp::kInf, 0.0, "s_ride"), 1.0}},
                {}, 0.0);
        }
      }

      // Shortfall penalties from the latest arrival step on.
      for (int c = 0; c < nc; ++c) {
        if (vm.shortfall[c] < 0) continue;
        std::vector<std::pair<int, double>> own{{vm.shortfall[c], 1.0}};
        std::vector<std::pair<int, double>> state;
        if (vm.cum[kPrebooked][c] >= 0) own.emplace_back(vm.cum[kPrebooked][c], 1.0);
        if (vm.cum[kOndemand][c] >= 0) own.emplace_back(vm.cum[kOndemand][c], 1.0);
        const int pre_slot = layout.find(t - 1, SlotKind::PrebookedTotal, -1, c, -1, 0, -1);
        if (pre_slot >= 0) state.emplace_back(pre_slot, -1.0);
        const int on_slot = layout.find(t - 1, SlotKind::OndemandTotal, -1, c, -1, 0, -1);
        if (on_slot >= 0) state.emplace_back(on_slot, -1.0);
        b.row("short" + std::to_string(c), std::move(own), std::move(state), 0.0);
      }

      // Early vehicle exits are penalized before the final step.
      if (t < T) {
        for (int i = 0; i < num_nodes; ++i) {
          std::vector<std::pair<int, double>> own{{vm.exit_penalty[i], 1.0}};
          for (int vc : layout.vehicle_classes()) own.emplace_back(vm.veh_exit[vc][i], -1.0);
          b.row("pexit[" + in.network.nodes[i].id + "]", std::move(own), {}, 0.0);
        }
      }

      // Carry rows: copies equal their predecessor slot; on-demand totals are
      // recorded from this stage's noise when the departure happens now.
      std::vector<int> on_total_rec_row(nc, -1);
      if (t < T) {
        const auto& out_slots = layout.slots(t);
        for (size_t si = 0; si < out_slots.size(); ++si) {
          const StateSlot& s = out_slots[si];
          switch (s.kind) {
            case SlotKind::VehicleFlow:
            case SlotKind::TravelerFlow: {
              if (s.lag == 0) break;
              const int src =
                  s.kind == SlotKind::VehicleFlow
                      ? layout.find(t - 1, SlotKind::VehicleFlow, s.cls, -1, s.entity,
                                    s.lag - 1, -1)
                      : layout.find(t - 1, SlotKind::TravelerFlow, s.cls, s.commodity,
                                    s.entity, s.lag - 1, -1);
              b.row("carrylag", {{slot_var[si], 1.0}}, {{src, -1.0}}, 0.0);
              break;
            }
            case SlotKind::DemandMemory: {
              const int src =
                  layout.find(t - 1, SlotKind::DemandMemory, -1, -1, -1, 0, s.cell);
              b.row("xicarry" + std::to_string(s.cell), {{slot_var[si], 1.0}},
                    {{src, -1.0}}, 0.0);
              break;
            }
            case SlotKind::PrebookedTotal: {
              const int src =
                  layout.find(t - 1, SlotKind::PrebookedTotal, -1, s.commodity, -1, 0, -1);
              b.row("xitotc" + std::to_string(s.commodity), {{slot_var[si], 1.0}},
                    {{src, -1.0}}, 0.0);
              break;
            }
            case SlotKind::OndemandTotal: {
              if (commodities[s.commodity].k == t) {
                on_total_rec_row[s.commodity] =
                    b.row("xihrec" + std::to_string(s.commodity), {{slot_var[si], 1.0}},
                          {}, 0.0);
              } else {
                const int src = layout.find(t - 1, SlotKind::OndemandTotal, -1,
                                            s.commodity, -1, 0, -1);
                b.row("xihc" + std::to_string(s.commodity), {{slot_var[si], 1.0}},
                      {{src, -1.0}}, 0.0);
              }
              break;
            }
            default:
              break;
          }
        }
        b.st.state_out = slot_var;
      }

      // Stage noise: on-demand entries hit the origin's conservation row and
      // the commodity's recording row.
      for (const scenario::NoiseRealization& real : scenarios[t].realizations) {
        msslp::NoiseRealization nr;
        for (const scenario::CellQuantity& q : real.cells) {
          auto it = cell_lookup.find({q.origin, q.dest, q.k});
          if (it == cell_lookup.end() || q.k != t)
            throw ValidationError("scenario: stage " + std::to_string(t) +
                                  " draw references cell with departure " +
                                  std::to_string(q.k));
          const int c = cells[it->second].commodity;
          if (cons_row[kOndemand][c][q.origin] < 0 || on_total_rec_row[c] < 0)
            throw ValidationError("scenario: stage " + std::to_string(t) +
                                  " draw for a commodity without on-demand rows");
          if (q.quantity != 0.0) {
            nr.rhs_delta.emplace_back(cons_row[kOndemand][c][q.origin], q.quantity);
            nr.rhs_delta.emplace_back(on_total_rec_row[c], q.quantity);
          }
        }
        stage_noise.realizations.push_back(std::move(nr));
      }
    }

    model.problem.stages[t] = std::move(b.st);
    if (stage_noise.realizations.empty()) stage_noise.realizations.push_back({});
    model.problem.noise[t] = std::move(stage_noise);
  }

  return model;
}

SavModel compile_sav_problem(const SavInputs& in) {
  in.network.validate();
  in.demand.validate(in.network);
  const auto sets = scenario::sample_all_noise(in.demand, in.options.saa_samples,
                                               in.options.seed);
  return compile_sav_problem(in, sets);
}

PerformanceReport extract_performance(const SavModel& model,
                                      const std::vector<std::vector<double>>& path) {
  const int S = model.problem.num_stages();
  if (static_cast<int>(path.size()) != S)
    throw ValidationError("extract_performance: path has " + std::to_string(path.size()) +
                          " stages, model has " + std::to_string(S));
  for (int t = 0; t < S; ++t) {
    if (static_cast<int>(path[t].size()) < model.problem.stages[t].var_count)
      throw ValidationError("extract_performance: stage " + std::to_string(t) +
                            " solution is missing variables");
  }

  const TimeExpandedNetwork& ten = model.network;
  const auto& commodities = model.layout.commodities();
  PerformanceReport rep;

  for (int e = 0; e < ten.num_entities(); ++e) {
    const int v = model.vars[0].mu[e];
    rep.infrastructure_cost += ten.entity(e).unit_cost * path[0][v];
  }
  for (int vc : model.layout.vehicle_classes()) {
    for (int i = 0; i < ten.num_nodes(); ++i) {
      const int v = model.vars[1].deploy[vc][i];
      if (v >= 0) rep.fleet_size += path[1][v];
    }
  }
  for (size_t li = 0; li < model.layout.cells().size(); ++li) {
    const int v = model.vars[1].memory[li];
    if (v >= 0) rep.prebooked_travelers += path[1][v];
  }

  double pre_time = 0.0, on_time = 0.0;
  for (int t = 2; t < S; ++t) {
    const StageVarMap& vm = model.vars[t];
    for (int vc : model.layout.vehicle_classes()) {
      for (int e = 0; e < ten.num_entities(); ++e) {
        const int v = vm.veh[vc][e];
        if (v >= 0 && !ten.entity(e).is_node)
          rep.total_distance += ten.entity(e).length * path[t][v];
      }
    }
    for (int tc : {kPrebooked, kOndemand}) {
      for (size_t c = 0; c < commodities.size(); ++c) {
        for (int e = 0; e < ten.num_entities(); ++e) {
          const int v = vm.trav[tc][c][e];
          if (v < 0) continue;
          const double time = ten.entity(e).travel_time * path[t][v];
          if (ten.entity(e).is_node) rep.waiting_time += time;
          else rep.riding_time += time;
          (tc == kPrebooked ? pre_time : on_time) += time;
        }
      }
    }
    for (size_t c = 0; c < commodities.size(); ++c) {
      const int v = vm.shortfall[c];
      if (v >= 0) rep.shortfall_penalty += path[t][v];
      if (commodities[c].k == t) {
        const int rec = vm.on_total[c];
        if (rec >= 0) rep.ondemand_travelers += path[t][rec];
      }
    }
    for (int i = 0; i < ten.num_nodes(); ++i) {
      const int v = vm.exit_penalty[i];
      if (v >= 0) rep.early_exit_penalty += path[t][v];
    }
  }
  rep.total_travel_time = rep.riding_time + rep.waiting_time;
  rep.prebooked_time_per_traveler =
      rep.prebooked_travelers > 0 ? pre_time / rep.prebooked_travelers : 0.0;
  rep.ondemand_time_per_traveler =
      rep.ondemand_travelers > 0 ? on_time / rep.ondemand_travelers : 0.0;
  return rep;
}

}  // namespace savsddp::sav
