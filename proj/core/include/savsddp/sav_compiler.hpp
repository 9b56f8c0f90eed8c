#pragma once

#include <array>
#include <vector>

#include "savsddp/demand.hpp"
#include "savsddp/msslp.hpp"
#include "savsddp/network.hpp"
#include "savsddp/scenario.hpp"
#include "savsddp/state_layout.hpp"

namespace savsddp::sav {

struct SavInputs {
  NetworkSpec network;
  DemandSpec demand;
  Weights weights;
  SavOptions options;
};

/// Variable index maps for one stage; -1 where a variable does not exist.
/// Class-indexed arrays use the kDedicated/kNonDedicated and
/// kPrebooked/kOndemand constants directly.
struct StageVarMap {
  std::vector<int> mu;                                    // [entity]
  std::array<std::vector<int>, 2> veh;                    // [vclass][entity]
  std::array<std::vector<int>, 2> veh_exit;               // [vclass][node]
  std::array<std::vector<std::vector<int>>, 2> trav;      // [tclass][commodity][entity]
  std::array<std::vector<std::vector<int>>, 2> trav_exit; // [tclass][commodity][node]
  std::vector<std::vector<int>> riders;                   // [commodity][entity], dedicated
  std::array<std::vector<int>, 2> cum;                    // [tclass][commodity]
  std::vector<int> shortfall;                             // [commodity] P_s
  std::vector<int> exit_penalty;                          // [node] P_i
  std::array<std::vector<int>, 2> deploy;                 // [vclass][node], stage 1
  std::vector<int> memory;                                // [cell]
  std::vector<int> pre_total;                             // [commodity]
  std::vector<int> on_total;                              // [commodity]
};

/// Compiled [SAV] staged problem: stage 0 sizes infrastructure, stage 1
/// deploys the fleet under observed pre-booked demand, stages 2..T run
/// operations. Demand attraction and early-exit constraints are replaced by
/// penalty variables so every subproblem stays feasible for any reachable
/// state. Compilation is pure and deterministic.
struct SavModel {
  TimeExpandedNetwork network;
  DemandSpec demand;
  Weights weights;
  SavOptions options;
  StateLayout layout;
  msslp::StagedProblem problem;
  std::vector<StageVarMap> vars;            // per stage
  std::vector<scenario::NoiseSet> noise;    // demand draws behind problem.noise
};

/// Samples the SAA noise internally (options.saa_samples per stochastic
/// stage, streams derived from options.seed).
SavModel compile_sav_problem(const SavInputs& in);

/// Uses the caller's demand scenarios, one NoiseSet per stage 0..T.
SavModel compile_sav_problem(const SavInputs& in,
                             const std::vector<scenario::NoiseSet>& scenarios);

/// Aggregates a stage-complete primal path into the performance indexes:
/// travel time (riding + waiting), vehicle distance, fleet size,
/// infrastructure cost, penalty totals, and per-class per-traveler time.
PerformanceReport extract_performance(const SavModel& model,
                                      const std::vector<std::vector<double>>& solved_path);

}  // namespace savsddp::sav
