#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "savsddp/cuts.hpp"
#include "savsddp/msslp.hpp"
#include "savsddp/rng.hpp"
#include "savsddp/simplex.hpp"

namespace savsddp::sddp {

struct TrainOptions {
  int max_iterations = 1000;
  int forward_paths = 3;   // M sample paths per iteration
  double epsilon = 1e-2;   // convergence threshold on the gap
  bool absolute_gap = false;  // test upper-lower instead of the relative gap
  double z_alpha = 1.96;
  std::uint64_t seed = 0;
  int threads = 0;               // <=0: SAVSDDP_THREADS env, then hardware
  bool dominance_filter = false;
  bool verify_solves = false;    // run verify_optimality on every Optimal solve
};

struct BoundRecord {
  int iteration = 0;
  double lower = 0.0;
  double upper_mean = 0.0;
  double upper_sd = 0.0;
  double upper = 0.0;
  double rel_gap = 0.0;
};

struct BoundHistory {
  std::vector<BoundRecord> records;

  /// CSV schema: iteration,lower,upper_mean,upper_sd,upper,rel_gap
  void write_csv(std::ostream& out) const;
};

struct TrainedPolicy {
  CutPool cuts;
  std::vector<double> first_stage_solution;
  double lower_bound = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct TrainResult {
  TrainedPolicy policy;
  BoundHistory history;
};

struct ForwardResult {
  // states[m][t]: outgoing state of stage t along path m (t = 0..S-2).
  std::vector<std::vector<std::vector<double>>> states;
  std::vector<std::vector<int>> noise_indices;  // [m][t]
  std::vector<double> objectives;               // stage costs only, no theta
  std::vector<std::vector<double>> stage_costs;  // [m][t]
  std::vector<std::vector<std::vector<double>>> primals;  // filled on request
  double mean = 0.0, sd = 0.0, upper = 0.0;
};

struct BackwardResult {
  std::vector<std::vector<Cut>> appended;  // indexed by the pool stage
  double lower = 0.0;
  std::vector<double> first_stage_primal;
};

struct EvaluationStats {
  double mean = 0.0, sd = 0.0;
  std::vector<double> stage_mean;
  int paths = 0;
};

struct PathTrace {
  std::vector<std::vector<double>> stage_primal;
  std::vector<int> noise_index;
  std::vector<double> stage_cost;
  double objective = 0.0;
};

/// Inputs for one realization when assembling a cut: subproblem value, duals
/// of the transition rows, and the dense incoming-state matrix B^n.
struct PerNoiseDual {
  double value = 0.0;
  std::vector<double> dual;
  std::vector<std::vector<double>> transition;  // rows x state dims
};

/// g = mean of -(B^n)^T pi^n, beta = mean value - g . trial_state.
Cut compute_cut(const std::vector<double>& trial_state,
                const std::vector<PerNoiseDual>& per_noise);

/// (upper - lower) / max(|upper|, 1e-12), clamped at zero: the statistical
/// upper bound may dip below the lower bound.
double relative_gap(double lower, double upper);

/// mean + z_alpha * sd / sqrt(paths).
double upper_bound_estimate(double mean, double sd, int paths, double z_alpha);

/// SDDP training loop: forward evaluation passes, backward cut generation,
/// bound tracking. The engine presents a sequential API; within one backward
/// stage the M x N_t subproblems are independent and may run on worker
/// threads, with results reduced in deterministic index order, so outcomes do
/// not depend on the thread count.
class SddpEngine {
 public:
  SddpEngine(const msslp::StagedProblem& problem, TrainOptions options);

  TrainResult train();

  ForwardResult forward_pass(const CutPool& pool, int paths, Rng& rng,
                             bool capture_primals = false);
  BackwardResult backward_pass(CutPool& pool, const ForwardResult& trials);

  EvaluationStats evaluate(const TrainedPolicy& policy, int n_paths,
                           std::uint64_t seed);
  std::vector<PathTrace> evaluate_traced(const TrainedPolicy& policy, int n_paths,
                                         std::uint64_t seed,
                                         EvaluationStats* stats = nullptr);

  const TrainOptions& options() const { return opts_; }

 private:
  struct Solved;
  Solved solve_stage(int t, std::span<const double> state_in, int noise_index,
                     const CutPool& pool, lp::BasisState& cache, const char* phase,
                     int path);
  double stage_cost(int t, int noise_index, const std::vector<double>& primal) const;
  std::vector<double> extract_state(int t, const std::vector<double>& primal) const;
  ForwardResult run_forward(const CutPool& pool, int paths, Rng& rng,
                            bool capture_primals,
                            std::vector<lp::BasisState>* caches);

  const msslp::StagedProblem& problem_;
  TrainOptions opts_;
  lp::SimplexSolver solver_;
  int resolved_threads_ = 1;
  lp::BasisState first_stage_cache_;
  std::vector<std::vector<lp::BasisState>> forward_cache_;          // [t][m]
  std::vector<std::vector<std::vector<lp::BasisState>>> backward_cache_;  // [t][m][n]
};

int resolve_threads(int requested);

}  // namespace savsddp::sddp
