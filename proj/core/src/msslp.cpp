#include "savsddp/msslp.hpp"

#include <algorithm>
#include <cmath>

namespace savsddp::msslp {

namespace {

void check_stage_index(const StagedProblem& p, int t) {
  if (t < 0 || t >= p.num_stages())
    throw ValidationError("stage index " + std::to_string(t) + " out of range [0," +
                          std::to_string(p.num_stages()) + ")");
}

}  // namespace

std::vector<Diagnostic> validate(const StagedProblem& p) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string where, std::string msg) {
    out.push_back({std::move(where), std::move(msg)});
  };

  if (p.num_stages() < 2) add("problem", "stage count must be at least 2");
  if (p.noise.size() != p.stages.size())
    add("problem", "noise set count " + std::to_string(p.noise.size()) +
                       " does not match stage count " + std::to_string(p.stages.size()));

  for (int t = 0; t < p.num_stages(); ++t) {
    const StageTemplate& st = p.stages[t];
    const std::string where = "stage " + std::to_string(t);
    const int nv = st.var_count;
    if (static_cast<int>(st.lower.size()) != nv || static_cast<int>(st.upper.size()) != nv ||
        static_cast<int>(st.cost.size()) != nv) {
      add(where, "bound/cost vectors do not match var_count");
      continue;
    }
    for (int j = 0; j < nv; ++j) {
      if (!std::isfinite(st.lower[j]) || std::isnan(st.upper[j]) || st.lower[j] > st.upper[j])
        add(where, "variable " + std::to_string(j) + " has invalid bounds");
      if (!std::isfinite(st.cost[j]))
        add(where, "variable " + std::to_string(j) + " has non-finite cost");
    }
    const int expected_in =
        t == 0 ? static_cast<int>(p.initial_state.size())
               : static_cast<int>(p.stages[t - 1].state_out.size());
    if (st.state_in_dim != expected_in)
      add(where, "state_in_dim " + std::to_string(st.state_in_dim) +
                     " does not chain with previous stage's state (" +
                     std::to_string(expected_in) + " slots)");
    for (size_t ri = 0; ri < st.rows.size(); ++ri) {
      const StageRow& r = st.rows[ri];
      for (const auto& [j, a] : r.own) {
        if (j < 0 || j >= nv)
          add(where, "row '" + r.id + "' references variable " + std::to_string(j) +
                         " out of range");
        if (!std::isfinite(a)) add(where, "row '" + r.id + "' has non-finite coefficient");
      }
      for (const auto& [k, a] : r.state) {
        if (k < 0 || k >= st.state_in_dim)
          add(where, "row '" + r.id + "' references incoming state slot " +
                         std::to_string(k) + " out of range");
        if (!std::isfinite(a))
          add(where, "row '" + r.id + "' has non-finite state coefficient");
      }
      if (!std::isfinite(r.rhs)) add(where, "row '" + r.id + "' has non-finite rhs");
    }
    std::vector<std::uint8_t> seen(nv, 0);
    for (int j : st.state_out) {
      if (j < 0 || j >= nv) {
        add(where, "state_out references variable " + std::to_string(j) + " out of range");
      } else if (seen[j]++) {
        add(where, "state_out lists variable " + std::to_string(j) + " twice");
      }
    }

    if (t < static_cast<int>(p.noise.size())) {
      const NoiseSet& ns = p.noise[t];
      if (ns.stage != t)
        add(where, "noise set is tagged for stage " + std::to_string(ns.stage));
      if (ns.realizations.empty()) add(where, "empty noise set");
      if (t == 0 && ns.realizations.size() > 1)
        add(where, "stage 0 must be deterministic (one realization)");
      for (const NoiseRealization& re : ns.realizations) {
        for (const auto& [i, dv] : re.rhs_delta) {
          if (i < 0 || i >= static_cast<int>(st.rows.size()))
            add(where, "noise rhs delta references row " + std::to_string(i) +
                           " out of range");
          if (!std::isfinite(dv)) add(where, "noise rhs delta is non-finite");
        }
        for (const auto& [j, dv] : re.cost_delta) {
          if (j < 0 || j >= nv)
            add(where, "noise cost delta references variable " + std::to_string(j) +
                           " out of range");
          if (!std::isfinite(dv)) add(where, "noise cost delta is non-finite");
        }
      }
    }
  }
  return out;
}

int theta_index(const StagedProblem& p, int t) {
  check_stage_index(p, t);
  return t + 1 == p.num_stages() ? -1 : p.stages[t].var_count;
}

lp::LpProblem instantiate_subproblem(const StagedProblem& p, int t,
                                     std::span<const double> state_in, int noise_index,
                                     const sddp::CutPool& cuts) {
  check_stage_index(p, t);
  const StageTemplate& st = p.stages[t];
  if (static_cast<int>(state_in.size()) != st.state_in_dim)
    throw ValidationError("stage " + std::to_string(t) + ": state_in has " +
                          std::to_string(state_in.size()) + " slots, template expects " +
                          std::to_string(st.state_in_dim));
  if (noise_index < 0 || noise_index >= p.n_realizations(t))
    throw ValidationError("stage " + std::to_string(t) + ": noise index " +
                          std::to_string(noise_index) + " out of range");

  const NoiseRealization& noise = p.noise[t].realizations[noise_index];
  const bool last = t + 1 == p.num_stages();
  const std::vector<sddp::Cut>* pool = nullptr;
  if (!last && cuts.num_stages() > t) pool = &cuts.at(t);

  lp::LpProblem out;
  for (int j = 0; j < st.var_count; ++j) {
    out.add_variable(st.lower[j], st.upper[j], st.cost[j],
                     st.var_names.empty() ? std::string() : st.var_names[j]);
  }
  for (const auto& [j, dv] : noise.cost_delta) out.mutable_cost(j) += dv;

  int theta = -1;
  if (!last) theta = out.add_variable(p.theta_floor, lp::kInf, 1.0, "theta");

  std::vector<double> rhs(st.rows.size());
  for (size_t i = 0; i < st.rows.size(); ++i) rhs[i] = st.rows[i].rhs;
  for (const auto& [i, dv] : noise.rhs_delta) rhs[i] += dv;
  for (size_t i = 0; i < st.rows.size(); ++i) {
    double r = rhs[i];
    for (const auto& [k, a] : st.rows[i].state) r -= a * state_in[k];
    out.add_row(st.rows[i].id, st.rows[i].own, r);
  }

  if (pool) {
    for (size_t k = 0; k < pool->size(); ++k) {
      const sddp::Cut& c = (*pool)[k];
      if (c.gradient.size() != st.state_out.size())
        throw ValidationError("stage " + std::to_string(t) + ": cut " + std::to_string(k) +
                              " gradient dimension mismatch");
      const int surplus =
          out.add_variable(0.0, lp::kInf, 0.0, "cut_s" + std::to_string(k));
      std::vector<std::pair<int, double>> coeffs;
      coeffs.reserve(2 + c.gradient.size());
      coeffs.emplace_back(theta, 1.0);
      for (size_t s = 0; s < c.gradient.size(); ++s) {
        if (c.gradient[s] != 0.0) coeffs.emplace_back(st.state_out[s], -c.gradient[s]);
      }
      coeffs.emplace_back(surplus, -1.0);
      out.add_row("cut" + std::to_string(k), std::move(coeffs), c.intercept);
    }
  }
  return out;
}

void accumulate_state_gradient(const StageTemplate& st, std::span<const double> pi,
                               std::span<double> g) {
  for (size_t i = 0; i < st.rows.size(); ++i) {
    const double d = pi[i];
    if (d == 0.0) continue;
    for (const auto& [k, a] : st.rows[i].state) g[k] -= a * d;
  }
}

long long count_scenarios(const StagedProblem& p, int from_stage) {
  long long count = 1;
  for (int t = from_stage; t < p.num_stages(); ++t) {
    count *= p.n_realizations(t);
    if (count < 0 || count > (1LL << 40)) return 1LL << 40;  // saturate
  }
  return count;
}

lp::LpProblem tail_extensive_form(const StagedProblem& p, int from_stage,
                                  std::span<const double> state_in,
                                  long long max_scenarios) {
  check_stage_index(p, from_stage);
  const int expected =
      from_stage == 0 ? static_cast<int>(p.initial_state.size())
                      : p.stages[from_stage].state_in_dim;
  if (static_cast<int>(state_in.size()) != expected)
    throw ValidationError("tail_extensive_form: state_in has " +
                          std::to_string(state_in.size()) + " slots, expected " +
                          std::to_string(expected));
  const long long scen = count_scenarios(p, from_stage);
  if (scen > max_scenarios) throw ScenarioCapExceeded(scen, max_scenarios);

  struct Node {
    int stage;
    int noise;
    int parent;      // index into the previous level, -1 at the root level
    int var_offset;
    double prob;
  };

  lp::LpProblem out;
  std::vector<Node> prev_level, level;
  std::vector<std::vector<Node>> levels;
  for (int t = from_stage; t < p.num_stages(); ++t) {
    const StageTemplate& st = p.stages[t];
    const int nt = p.n_realizations(t);
    level.clear();
    if (t == from_stage) {
      for (int n = 0; n < nt; ++n) level.push_back({t, n, -1, 0, 1.0 / nt});
    } else {
      for (int pi = 0; pi < static_cast<int>(prev_level.size()); ++pi) {
        for (int n = 0; n < nt; ++n)
          level.push_back({t, n, pi, 0, prev_level[pi].prob / nt});
      }
    }
    for (Node& node : level) {
      node.var_offset = out.num_vars();
      const NoiseRealization& noise = p.noise[t].realizations[node.noise];
      for (int j = 0; j < st.var_count; ++j) {
        out.add_variable(st.lower[j], st.upper[j], node.prob * st.cost[j]);
      }
      for (const auto& [j, dv] : noise.cost_delta)
        out.mutable_cost(node.var_offset + j) += node.prob * dv;
    }
    levels.push_back(level);
    prev_level = std::move(level);
    level.clear();
  }

  // Rows link each node to its parent's copies (or to the fixed state_in for
  // the root level).
  for (size_t li = 0; li < levels.size(); ++li) {
    const int t = from_stage + static_cast<int>(li);
    const StageTemplate& st = p.stages[t];
    for (size_t ni = 0; ni < levels[li].size(); ++ni) {
      const Node& node = levels[li][ni];
      const NoiseRealization& noise = p.noise[t].realizations[node.noise];
      std::vector<double> rhs(st.rows.size());
      for (size_t i = 0; i < st.rows.size(); ++i) rhs[i] = st.rows[i].rhs;
      for (const auto& [i, dv] : noise.rhs_delta) rhs[i] += dv;
      const std::string prefix =
          "s" + std::to_string(t) + "n" + std::to_string(ni) + ":";
      for (size_t i = 0; i < st.rows.size(); ++i) {
        const StageRow& r = st.rows[i];
        std::vector<std::pair<int, double>> coeffs;
        coeffs.reserve(r.own.size() + r.state.size());
        for (const auto& [j, a] : r.own) coeffs.emplace_back(node.var_offset + j, a);
        double rv = rhs[i];
        if (node.parent < 0) {
          for (const auto& [k, a] : r.state) rv -= a * state_in[k];
        } else {
          const Node& par = levels[li - 1][node.parent];
          const StageTemplate& pst = p.stages[t - 1];
          for (const auto& [k, a] : r.state)
            coeffs.emplace_back(par.var_offset + pst.state_out[k], a);
        }
        out.add_row(prefix + (r.id.empty() ? "r" + std::to_string(i) : r.id),
                    std::move(coeffs), rv);
      }
    }
  }
  return out;
}

lp::LpProblem extensive_form(const StagedProblem& p, long long max_scenarios) {
  return tail_extensive_form(p, 0, p.initial_state, max_scenarios);
}

}  // namespace savsddp::msslp
