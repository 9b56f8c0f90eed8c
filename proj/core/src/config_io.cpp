#include "savsddp/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "savsddp/errors.hpp"
#include "savsddp/scenario.hpp"

namespace savsddp::sav {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& need(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required key");
  return *it;
}

double need_num(const json& obj, const std::string& path, const char* key) {
  const json& v = need(obj, path, key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double opt_num(const json& obj, const std::string& path, const char* key, double dflt) {
  if (!obj.is_object() || !obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int need_int(const json& obj, const std::string& path, const char* key) {
  const json& v = need(obj, path, key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool opt_bool(const json& obj, const std::string& path, const char* key, bool dflt) {
  if (!obj.is_object() || !obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected true or false");
  return v.get<bool>();
}

std::string need_str(const json& obj, const std::string& path, const char* key) {
  const json& v = need(obj, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

const json& need_array(const json& obj, const std::string& path, const char* key) {
  const json& v = need(obj, path, key);
  if (!v.is_array()) fail(path + "." + key, "expected an array");
  return v;
}

NetworkSpec parse_network(const json& j) {
  NetworkSpec net;
  const json& nodes = need_array(j, "network", "nodes");
  for (size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "network.nodes[" + std::to_string(i) + "]";
    const json& n = nodes[i];
    NodeSpec node;
    node.id = need_str(n, path, "id");
    node.storage_cost = opt_num(n, path, "storage_cost", 0.0);
    node.cap_min = opt_num(n, path, "cap_min", 0.0);
    node.cap_max = opt_num(n, path, "cap_max", 0.0);
    net.nodes.push_back(std::move(node));
  }
  const json& links = need_array(j, "network", "links");
  for (size_t i = 0; i < links.size(); ++i) {
    const std::string path = "network.links[" + std::to_string(i) + "]";
    const json& l = links[i];
    LinkSpec link;
    link.from = need_str(l, path, "from");
    link.to = need_str(l, path, "to");
    link.travel_time = need_int(l, path, "travel_time");
    link.length = need_num(l, path, "length");
    link.cost = need_num(l, path, "cost");
    link.cap_min = opt_num(l, path, "cap_min", 0.0);
    link.cap_max = need_num(l, path, "cap_max");
    net.links.push_back(std::move(link));
  }
  return net;
}

int resolve_node(const NetworkSpec& net, const std::string& id, const std::string& path) {
  const int idx = net.node_index(id);
  if (idx < 0) fail(path, "unknown node id '" + id + "'");
  return idx;
}

DemandSpec parse_demand(const json& j, const NetworkSpec& net) {
  DemandSpec d;
  d.horizon = need_int(j, "demand", "horizon");
  d.booking_rate = opt_num(j, "demand", "booking_rate", 0.5);
  d.noise_halfwidth = opt_num(j, "demand", "noise_halfwidth", 0.2);

  const json& deps = need_array(j, "demand", "departures");
  const bool generate = j.is_object() && j.contains("generate");

  if (!generate) {
    for (size_t i = 0; i < deps.size(); ++i) {
      const std::string path = "demand.departures[" + std::to_string(i) + "]";
      const json& dj = deps[i];
      Departure dep;
      dep.k = need_int(dj, path, "k");
      dep.latest_arrival = need_int(dj, path, "latest_arrival");
      const json& ods = need_array(dj, path, "od");
      for (size_t oi = 0; oi < ods.size(); ++oi) {
        const std::string opath = path + ".od[" + std::to_string(oi) + "]";
        const json& oj = ods[oi];
        OdEntry od;
        od.origin = resolve_node(net, need_str(oj, opath, "origin"), opath + ".origin");
        od.dest = resolve_node(net, need_str(oj, opath, "dest"), opath + ".dest");
        od.expected = need_num(oj, opath, "expected");
        dep.od.push_back(od);
      }
      d.departures.push_back(std::move(dep));
    }
    return d;
  }

  // demand.generate: allocate a total over OD pairs with a seeded partition;
  // departures then carry no od lists of their own.
  const json& g = j.at("generate");
  const double total = need_num(g, "demand.generate", "total_expected");
  const auto seed = static_cast<std::uint64_t>(opt_num(g, "demand.generate", "seed", 0));
  std::vector<std::pair<int, int>> od_pairs;
  if (g.contains("od_pairs") && g.at("od_pairs").is_array()) {
    const json& pairs = g.at("od_pairs");
    for (size_t i = 0; i < pairs.size(); ++i) {
      const std::string path = "demand.generate.od_pairs[" + std::to_string(i) + "]";
      const json& pj = pairs[i];
      if (!pj.is_array() || pj.size() != 2 || !pj[0].is_string() || !pj[1].is_string())
        fail(path, "expected [\"origin\",\"dest\"]");
      od_pairs.emplace_back(resolve_node(net, pj[0].get<std::string>(), path),
                            resolve_node(net, pj[1].get<std::string>(), path));
    }
  } else {
    for (size_t a = 0; a < net.nodes.size(); ++a) {
      for (size_t b = 0; b < net.nodes.size(); ++b) {
        if (a != b) od_pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }
  std::vector<std::pair<int, int>> departures;
  for (size_t i = 0; i < deps.size(); ++i) {
    const std::string path = "demand.departures[" + std::to_string(i) + "]";
    departures.emplace_back(need_int(deps[i], path, "k"),
                            need_int(deps[i], path, "latest_arrival"));
  }
  DemandSpec gen = scenario::make_demand_spec(total, d.booking_rate, departures,
                                              od_pairs, d.noise_halfwidth, d.horizon, seed);
  return gen;
}

}  // namespace

LoadedConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");

  LoadedConfig cfg;
  cfg.inputs.network = parse_network(need(root, origin, "network"));
  cfg.inputs.demand = parse_demand(need(root, origin, "demand"), cfg.inputs.network);

  const json& w = need(root, origin, "weights");
  cfg.inputs.weights.alpha_T = need_num(w, "weights", "alpha_T");
  cfg.inputs.weights.alpha_D = need_num(w, "weights", "alpha_D");
  cfg.inputs.weights.alpha_N = need_num(w, "weights", "alpha_N");
  cfg.inputs.weights.alpha_C = need_num(w, "weights", "alpha_C");
  cfg.inputs.weights.alpha_P = opt_num(w, "weights", "alpha_P", 0.0);

  const json& o = need(root, origin, "options");
  cfg.inputs.options.rho = need_num(o, "options", "rho");
  cfg.inputs.demand.dedicated = opt_bool(o, "options", "dedicated", false);
  cfg.inputs.demand.benchmark_blind = opt_bool(o, "options", "benchmark_blind", false);
  cfg.inputs.options.saa_samples = static_cast<int>(opt_num(o, "options", "saa_samples", 20));
  cfg.inputs.options.seed = static_cast<std::uint64_t>(opt_num(o, "options", "seed", 0));

  if (root.contains("experiments")) {
    const json& e = root.at("experiments");
    if (!e.is_object()) throw ConfigError("experiments: expected an object");
    auto num_list = [&](const char* key, std::vector<double>& out) {
      if (!e.contains(key)) return;
      const json& v = e.at(key);
      if (!v.is_array()) fail(std::string("experiments.") + key, "expected an array");
      out.clear();
      for (size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
          fail("experiments." + std::string(key) + "[" + std::to_string(i) + "]",
               "expected a number");
        out.push_back(v[i].get<double>());
      }
    };
    num_list("booking_rates", cfg.experiments.booking_rates);
    num_list("rhos", cfg.experiments.rhos);
    num_list("pareto_booking_rates", cfg.experiments.pareto_booking_rates);
    if (e.contains("weight_sets")) {
      const json& ws = e.at("weight_sets");
      if (!ws.is_array()) fail("experiments.weight_sets", "expected an array");
      cfg.experiments.weight_sets.clear();
      for (size_t i = 0; i < ws.size(); ++i) {
        const std::string path = "experiments.weight_sets[" + std::to_string(i) + "]";
        const json& row = ws[i];
        if (!row.is_array() || row.size() != 4) fail(path, "expected [aT,aD,aN,aC]");
        std::array<double, 4> set{};
        for (size_t c = 0; c < 4; ++c) {
          if (!row[c].is_number()) fail(path, "expected numbers");
          set[c] = row[c].get<double>();
        }
        cfg.experiments.weight_sets.push_back(set);
      }
    }
    cfg.experiments.eval_paths =
        static_cast<int>(opt_num(e, "experiments", "eval_paths",
                                 cfg.experiments.eval_paths));
    cfg.experiments.scenario_cap = static_cast<long long>(
        opt_num(e, "experiments", "scenario_cap",
                static_cast<double>(cfg.experiments.scenario_cap)));
  }

  // Surface malformed values now, with cheap structural checks.
  cfg.inputs.network.validate();
  cfg.inputs.demand.validate(cfg.inputs.network);
  cfg.inputs.weights.validate();
  return cfg;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace savsddp::sav
