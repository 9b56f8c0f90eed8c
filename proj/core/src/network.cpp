#include "savsddp/network.hpp"

#include <cmath>

#include "savsddp/errors.hpp"

namespace savsddp::sav {

int NetworkSpec::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

void NetworkSpec::validate() const {
  if (nodes.empty()) throw ValidationError("network: no nodes");
  for (size_t i = 0; i < nodes.size(); ++i) {
    const NodeSpec& n = nodes[i];
    if (n.id.empty()) throw ValidationError("network: node " + std::to_string(i) + " has empty id");
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[j].id == n.id)
        throw ValidationError("network: duplicate node id '" + n.id + "'");
    }
    if (n.storage_cost < 0) throw ValidationError("node '" + n.id + "': negative storage cost");
    if (n.cap_min < 0 || n.cap_min > n.cap_max)
      throw ValidationError("node '" + n.id + "': capacity bounds must satisfy 0 <= min <= max");
  }
  for (const LinkSpec& l : links) {
    if (node_index(l.from) < 0)
      throw ValidationError("link " + l.from + "->" + l.to + ": unknown node '" + l.from + "'");
    if (node_index(l.to) < 0)
      throw ValidationError("link " + l.from + "->" + l.to + ": unknown node '" + l.to + "'");
    if (l.from == l.to)
      throw ValidationError("link " + l.from + "->" + l.to + ": self-loops are waiting arcs, not links");
    if (l.travel_time < 1)
      throw ValidationError("link " + l.from + "->" + l.to + ": travel time must be an integer >= 1");
    if (l.length < 0) throw ValidationError("link " + l.from + "->" + l.to + ": negative length");
    if (l.cost < 0) throw ValidationError("link " + l.from + "->" + l.to + ": negative cost");
    if (l.cap_min < 0 || l.cap_min > l.cap_max)
      throw ValidationError("link " + l.from + "->" + l.to +
                            ": capacity bounds must satisfy 0 <= min <= max");
  }
}

NetworkSpec make_line_network(int n_nodes, int travel_time, double length,
                              double link_cost, double link_cap_min,
                              double link_cap_max, double storage_cost,
                              double node_cap_min, double node_cap_max) {
  NetworkSpec spec;
  for (int i = 0; i < n_nodes; ++i) {
    spec.nodes.push_back({"n" + std::to_string(i + 1), storage_cost, node_cap_min, node_cap_max});
  }
  for (int i = 0; i + 1 < n_nodes; ++i) {
    const std::string a = spec.nodes[i].id, b = spec.nodes[i + 1].id;
    spec.links.push_back({a, b, travel_time, length, link_cost, link_cap_min, link_cap_max});
    spec.links.push_back({b, a, travel_time, length, link_cost, link_cap_min, link_cap_max});
  }
  return spec;
}

TimeExpandedNetwork build_network(const NetworkSpec& spec, int horizon) {
  spec.validate();
  if (horizon < 2) throw ValidationError("network: horizon must be at least 2");

  TimeExpandedNetwork ten;
  ten.spec_ = spec;
  ten.horizon_ = horizon;
  for (const LinkSpec& l : spec.links) {
    Entity e;
    e.tail = spec.node_index(l.from);
    e.head = spec.node_index(l.to);
    e.travel_time = l.travel_time;
    e.length = l.length;
    e.unit_cost = l.cost;
    e.cap_min = l.cap_min;
    e.cap_max = l.cap_max;
    e.is_node = false;
    e.name = l.from + "->" + l.to;
    ten.entities_.push_back(e);
    if (l.travel_time > horizon) {
      ten.warnings_.push_back("link " + e.name + ": travel time " +
                              std::to_string(l.travel_time) +
                              " exceeds the horizon, no arcs generated");
    }
  }
  for (size_t i = 0; i < spec.nodes.size(); ++i) {
    const NodeSpec& n = spec.nodes[i];
    Entity e;
    e.tail = e.head = static_cast<int>(i);
    e.travel_time = 1;  // waiting advances one time step by definition
    e.length = 0.0;
    e.unit_cost = n.storage_cost;
    e.cap_min = n.cap_min;
    e.cap_max = n.cap_max;
    e.is_node = true;
    e.name = n.id;
    ten.entities_.push_back(e);
  }
  for (int e = 0; e < ten.num_entities(); ++e) {
    const Entity& ent = ten.entities_[e];
    for (int t = 0; t + ent.travel_time <= horizon; ++t) {
      const Arc arc{e, t, t + ent.travel_time};
      if (ent.is_node) {
        ten.waiting_arcs_.push_back(arc);
      } else {
        ten.movement_arcs_.push_back(arc);
      }
    }
  }
  return ten;
}

}  // namespace savsddp::sav
