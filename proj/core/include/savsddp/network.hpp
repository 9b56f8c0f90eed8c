#pragma once

#include <string>
#include <vector>

namespace savsddp::sav {

struct LinkSpec {
  std::string from, to;
  int travel_time = 1;     // time steps, integer >= 1
  double length = 1.0;     // distance units
  double cost = 0.0;       // expansion unit cost
  double cap_min = 0.0, cap_max = 0.0;
};

struct NodeSpec {
  std::string id;
  double storage_cost = 0.0;
  double cap_min = 0.0, cap_max = 0.0;
};

struct NetworkSpec {
  std::vector<NodeSpec> nodes;
  std::vector<LinkSpec> links;

  int node_index(const std::string& id) const;
  void validate() const;  // throws ValidationError
};

/// Convenience builder for the experiments: n nodes in a line, links in both
/// directions with uniform parameters.
NetworkSpec make_line_network(int n_nodes, int travel_time, double length,
                              double link_cost, double link_cap_min,
                              double link_cap_max, double storage_cost,
                              double node_cap_min, double node_cap_max);

/// A capacitated entity of the time-expanded network: either a directed link
/// (movement, tail != head) or a node's storage (waiting, tail == head,
/// travel time one step).
struct Entity {
  int tail = 0, head = 0;
  int travel_time = 1;
  double length = 0.0;
  double unit_cost = 0.0;
  double cap_min = 0.0, cap_max = 0.0;
  bool is_node = false;
  std::string name;
};

struct Arc {
  int entity = 0;
  int depart = 0, arrive = 0;
};

/// Nodes replicated per time step 0..T; movement arcs advance time by the
/// free-flow travel time, waiting arcs by one step; arcs whose head would
/// exceed T are dropped. Dummy-node entry/exit arcs are implicit: deployment
/// and demand entries appear as stage constants, exits as per-node variables.
class TimeExpandedNetwork {
 public:
  int horizon() const { return horizon_; }
  int num_nodes() const { return static_cast<int>(spec_.nodes.size()); }
  int num_entities() const { return static_cast<int>(entities_.size()); }
  int num_links() const { return num_entities() - num_nodes(); }
  int num_time_nodes() const { return num_nodes() * (horizon_ + 1); }

  const NetworkSpec& spec() const { return spec_; }
  const std::vector<Entity>& entities() const { return entities_; }
  const Entity& entity(int e) const { return entities_[e]; }
  /// Entity index of node i's storage (waiting) entry.
  int node_entity(int i) const { return num_links() + i; }

  const std::vector<Arc>& movement_arcs() const { return movement_arcs_; }
  const std::vector<Arc>& waiting_arcs() const { return waiting_arcs_; }

  /// True when entity e has an arc departing at t (head within the horizon).
  bool arc_exists(int e, int t) const {
    return t >= 0 && t + entities_[e].travel_time <= horizon_;
  }

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend TimeExpandedNetwork build_network(const NetworkSpec&, int);
  NetworkSpec spec_;
  int horizon_ = 0;
  std::vector<Entity> entities_;  // links first, then node storage entries
  std::vector<Arc> movement_arcs_, waiting_arcs_;
  std::vector<std::string> warnings_;
};

TimeExpandedNetwork build_network(const NetworkSpec& spec, int horizon);

}  // namespace savsddp::sav
