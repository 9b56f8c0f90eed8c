#include "savsddp/sddp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <ostream>
#include <thread>

#include "savsddp/csv.hpp"

namespace savsddp::sddp {

namespace {

/// Static partition of [0, n) over worker threads; results land in
/// caller-indexed slots and exceptions rethrow in task order, so execution is
/// deterministic for any thread count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int nw = std::min(threads, n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < n; i += nw) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SAVSDDP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Cut compute_cut(const std::vector<double>& trial_state,
                const std::vector<PerNoiseDual>& per_noise) {
  if (per_noise.empty()) throw ValidationError("compute_cut: empty realization list");
  const size_t dim = trial_state.size();
  Cut cut;
  cut.gradient.assign(dim, 0.0);
  double value_sum = 0.0;
  for (const PerNoiseDual& term : per_noise) {
    if (term.transition.size() != term.dual.size())
      throw ValidationError("compute_cut: B rows do not match dual length");
    for (size_t i = 0; i < term.transition.size(); ++i) {
      if (term.transition[i].size() != dim)
        throw ValidationError("compute_cut: B columns do not match state dimension");
      const double d = term.dual[i];
      if (d == 0.0) continue;
      for (size_t k = 0; k < dim; ++k) cut.gradient[k] -= term.transition[i][k] * d;
    }
    value_sum += term.value;
  }
  const double inv = 1.0 / static_cast<double>(per_noise.size());
  for (double& g : cut.gradient) g *= inv;
  double gx = 0.0;
  for (size_t k = 0; k < dim; ++k) gx += cut.gradient[k] * trial_state[k];
  cut.intercept = value_sum * inv - gx;
  return cut;
}

double relative_gap(double lower, double upper) {
  if (!std::isfinite(upper)) throw ValidationError("relative_gap: upper bound must be finite");
  const double denom = std::max(std::abs(upper), 1e-12);
  return std::max(0.0, (upper - lower) / denom);
}

double upper_bound_estimate(double mean, double sd, int paths, double z_alpha) {
  return mean + z_alpha * sd / std::sqrt(static_cast<double>(paths));
}

void BoundHistory::write_csv(std::ostream& out) const {
  out << "iteration,lower,upper_mean,upper_sd,upper,rel_gap\n";
  for (const BoundRecord& r : records) {
    out << r.iteration << ',' << format_double(r.lower) << ',' << format_double(r.upper_mean)
        << ',' << format_double(r.upper_sd) << ',' << format_double(r.upper) << ','
        << format_double(r.rel_gap) << '\n';
  }
}

struct SddpEngine::Solved {
  lp::LpOutcome outcome;
};

SddpEngine::SddpEngine(const msslp::StagedProblem& problem, TrainOptions options)
    : problem_(problem), opts_(options) {
  resolved_threads_ = resolve_threads(opts_.threads);
  const int s = problem_.num_stages();
  forward_cache_.resize(s);
  backward_cache_.resize(s);
}

SddpEngine::Solved SddpEngine::solve_stage(int t, std::span<const double> state_in,
                                           int noise_index, const CutPool& pool,
                                           lp::BasisState& cache, const char* phase,
                                           int path) {
  const lp::LpProblem lp = msslp::instantiate_subproblem(problem_, t, state_in,
                                                         noise_index, pool);
  lp::LpOutcome out = solver_.solve_with_hint(lp, cache);
  auto where = [&]() {
    return std::string(phase) + " pass: stage " + std::to_string(t) + ", path " +
           std::to_string(path) + ", realization " + std::to_string(noise_index);
  };
  if (out.status == lp::LpStatus::Infeasible)
    throw SddpError("infeasible subproblem in " + where() +
                    " (relatively complete recourse violated)");
  if (out.status == lp::LpStatus::Unbounded)
    throw SddpError("unbounded subproblem in " + where() +
                    " (cost-to-go floor missing)");
  if (opts_.verify_solves) {
    const auto rep = lp::SimplexSolver::verify_optimality(lp, out);
    if (!rep.pass)
      throw SddpError("optimality verification failed in " + where() +
                      ": primal " + std::to_string(rep.primal_residual) + ", dual " +
                      std::to_string(rep.dual_residual) + ", gap " +
                      std::to_string(rep.duality_gap));
  }
  cache = out.basis;
  return Solved{std::move(out)};
}

double SddpEngine::stage_cost(int t, int noise_index,
                              const std::vector<double>& primal) const {
  const msslp::StageTemplate& st = problem_.stages[t];
  double c = 0.0;
  for (int j = 0; j < st.var_count; ++j) c += st.cost[j] * primal[j];
  for (const auto& [j, dv] : problem_.noise[t].realizations[noise_index].cost_delta)
    c += dv * primal[j];
  return c;
}

std::vector<double> SddpEngine::extract_state(int t,
                                              const std::vector<double>& primal) const {
  const msslp::StageTemplate& st = problem_.stages[t];
  std::vector<double> out(st.state_out.size());
  for (size_t i = 0; i < st.state_out.size(); ++i) out[i] = primal[st.state_out[i]];
  return out;
}

ForwardResult SddpEngine::run_forward(const CutPool& pool, int paths, Rng& rng,
                                      bool capture_primals,
                                      std::vector<lp::BasisState>* caches) {
  const int s = problem_.num_stages();
  ForwardResult res;
  res.states.assign(paths, {});
  res.noise_indices.assign(paths, std::vector<int>(s, 0));
  res.objectives.assign(paths, 0.0);
  res.stage_costs.assign(paths, std::vector<double>(s, 0.0));
  if (capture_primals) res.primals.assign(paths, {});

  // All sampling happens up front in path-major order.
  for (int m = 0; m < paths; ++m) {
    for (int t = 1; t < s; ++t) {
      res.noise_indices[m][t] =
          static_cast<int>(rng.uniform_int(problem_.n_realizations(t)));
    }
  }

  // Stage 0 is deterministic and shared by every path.
  lp::BasisState& cache0 = caches ? (*caches)[0] : first_stage_cache_;
  Solved first = solve_stage(0, problem_.initial_state, 0, pool, cache0, "forward", 0);
  const std::vector<double> state0 = extract_state(0, first.outcome.primal);
  const double cost0 = stage_cost(0, 0, first.outcome.primal);

  for (int m = 0; m < paths; ++m) {
    std::vector<std::vector<double>>& path_states = res.states[m];
    path_states.resize(std::max(0, s - 1));
    if (s > 1) path_states[0] = state0;
    if (capture_primals) {
      res.primals[m].resize(s);
      res.primals[m][0] = first.outcome.primal;
    }
    res.stage_costs[m][0] = cost0;
    double total = cost0;
    std::vector<double> state = state0;
    for (int t = 1; t < s; ++t) {
      lp::BasisState& cache = caches ? (*caches)[t] : forward_cache_[t][m];
      Solved sol = solve_stage(t, state, res.noise_indices[m][t], pool, cache,
                               "forward", m);
      const double c = stage_cost(t, res.noise_indices[m][t], sol.outcome.primal);
      res.stage_costs[m][t] = c;
      total += c;
      if (t < s - 1) {
        state = extract_state(t, sol.outcome.primal);
        path_states[t] = state;
      }
      if (capture_primals) {
        sol.outcome.primal.resize(problem_.stages[t].var_count);
        res.primals[m][t] = std::move(sol.outcome.primal);
      }
    }
    res.objectives[m] = total;
  }

  double mean = 0.0;
  for (double v : res.objectives) mean += v;
  mean /= paths;
  double var = 0.0;
  if (paths > 1) {
    for (double v : res.objectives) var += (v - mean) * (v - mean);
    var /= (paths - 1);
  }
  res.mean = mean;
  res.sd = std::sqrt(var);
  res.upper = upper_bound_estimate(mean, res.sd, paths, opts_.z_alpha);
  return res;
}

ForwardResult SddpEngine::forward_pass(const CutPool& pool, int paths, Rng& rng,
                                       bool capture_primals) {
  const int s = problem_.num_stages();
  for (int t = 0; t < s; ++t) {
    if (static_cast<int>(forward_cache_[t].size()) < paths)
      forward_cache_[t].resize(paths);
  }
  return run_forward(pool, paths, rng, capture_primals, nullptr);
}

BackwardResult SddpEngine::backward_pass(CutPool& pool, const ForwardResult& trials) {
  const int s = problem_.num_stages();
  const int paths = static_cast<int>(trials.states.size());
  BackwardResult res;
  res.appended.resize(s);

  for (int t = 0; t < s; ++t) {
    if (static_cast<int>(backward_cache_[t].size()) < paths)
      backward_cache_[t].resize(paths);
    const int nt = problem_.n_realizations(t);
    for (auto& per_m : backward_cache_[t]) {
      if (static_cast<int>(per_m.size()) < nt) per_m.resize(nt);
    }
  }

  for (int t = s - 1; t >= 1; --t) {
    const msslp::StageTemplate& st = problem_.stages[t];
    const int nt = problem_.n_realizations(t);
    const size_t state_dim = st.state_in_dim;

    // The pool snapshot for stage t is frozen here: cuts appended while
    // processing stage t+1 are already installed, and the cuts this loop
    // appends live at stage t-1.
    std::vector<std::vector<double>> values(paths, std::vector<double>(nt, 0.0));
    std::vector<std::vector<std::vector<double>>> grads(
        paths, std::vector<std::vector<double>>(nt));

    parallel_for(paths * nt, resolved_threads_, [&](int task) {
      const int m = task / nt;
      const int n = task % nt;
      const std::vector<double>& state = trials.states[m][t - 1];
      Solved sol = solve_stage(t, state, n, pool, backward_cache_[t][m][n],
                               "backward", m);
      values[m][n] = sol.outcome.objective;
      std::vector<double> g(state_dim, 0.0);
      msslp::accumulate_state_gradient(st, sol.outcome.dual, g);
      grads[m][n] = std::move(g);
    });

    for (int m = 0; m < paths; ++m) {
      Cut cut;
      cut.bounds_stage = t;
      cut.gradient.assign(state_dim, 0.0);
      double vsum = 0.0;
      for (int n = 0; n < nt; ++n) {
        vsum += values[m][n];
        for (size_t k = 0; k < state_dim; ++k) cut.gradient[k] += grads[m][n][k];
      }
      const double inv = 1.0 / nt;
      for (double& g : cut.gradient) g *= inv;
      double gx = 0.0;
      const std::vector<double>& state = trials.states[m][t - 1];
      for (size_t k = 0; k < state_dim; ++k) gx += cut.gradient[k] * state[k];
      cut.intercept = vsum * inv - gx;

      if (opts_.dominance_filter) {
        if (pool.append_filtered(t - 1, cut)) res.appended[t - 1].push_back(cut);
      } else {
        pool.append(t - 1, cut);
        res.appended[t - 1].push_back(cut);
      }
    }
  }

  Solved first = solve_stage(0, problem_.initial_state, 0, pool, first_stage_cache_,
                             "backward", 0);
  res.lower = first.outcome.objective;
  res.first_stage_primal = first.outcome.primal;
  res.first_stage_primal.resize(problem_.stages[0].var_count);
  return res;
}

TrainResult SddpEngine::train() {
  const auto diagnostics = msslp::validate(problem_);
  if (!diagnostics.empty()) {
    throw ValidationError("train: staged problem fails validation: " +
                          diagnostics.front().where + ": " +
                          diagnostics.front().message);
  }

  const int s = problem_.num_stages();
  CutPool pool(s);
  TrainResult result;
  double best_lower = -lp::kInf;
  bool converged = false;
  int iterations = 0;
  std::vector<double> first_stage;

  for (int iter = 1; iter <= opts_.max_iterations; ++iter) {
    iterations = iter;
    Rng iter_rng(mix_seed(opts_.seed, static_cast<std::uint64_t>(iter)));
    ForwardResult fwd = forward_pass(pool, opts_.forward_paths, iter_rng);
    BackwardResult bwd = backward_pass(pool, fwd);
    // Both the running maximum and the fresh first-stage optimum are valid
    // lower bounds; reporting the envelope keeps the history monotone.
    best_lower = std::max(best_lower, bwd.lower);
    first_stage = bwd.first_stage_primal;

    const double rgap = relative_gap(best_lower, fwd.upper);
    result.history.records.push_back(
        {iter, best_lower, fwd.mean, fwd.sd, fwd.upper, rgap});

    const double gap = opts_.absolute_gap ? std::max(0.0, fwd.upper - best_lower) : rgap;
    if (gap <= opts_.epsilon) {
      converged = true;
      break;
    }
  }

  result.policy.cuts = std::move(pool);
  result.policy.first_stage_solution = std::move(first_stage);
  result.policy.lower_bound = best_lower;
  result.policy.converged = converged;
  result.policy.iterations = iterations;
  return result;
}

EvaluationStats SddpEngine::evaluate(const TrainedPolicy& policy, int n_paths,
                                     std::uint64_t seed) {
  EvaluationStats stats;
  evaluate_traced(policy, n_paths, seed, &stats);
  return stats;
}

std::vector<PathTrace> SddpEngine::evaluate_traced(const TrainedPolicy& policy,
                                                   int n_paths, std::uint64_t seed,
                                                   EvaluationStats* stats) {
  const int s = problem_.num_stages();
  std::vector<lp::BasisState> caches(s);
  Rng rng(mix_seed(seed, 0x65766131ULL));  // "eva1"
  ForwardResult fwd = run_forward(policy.cuts, n_paths, rng, true, &caches);

  std::vector<PathTrace> traces(n_paths);
  for (int m = 0; m < n_paths; ++m) {
    traces[m].stage_primal = std::move(fwd.primals[m]);
    traces[m].noise_index = fwd.noise_indices[m];
    traces[m].stage_cost = fwd.stage_costs[m];
    traces[m].objective = fwd.objectives[m];
  }
  if (stats) {
    stats->mean = fwd.mean;
    stats->sd = n_paths > 1 ? fwd.sd : 0.0;
    stats->paths = n_paths;
    stats->stage_mean.assign(s, 0.0);
    for (int m = 0; m < n_paths; ++m) {
      for (int t = 0; t < s; ++t) stats->stage_mean[t] += fwd.stage_costs[m][t];
    }
    for (double& v : stats->stage_mean) v /= n_paths;
  }
  return traces;
}

}  // namespace savsddp::sddp
