#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "savsddp/cuts.hpp"
#include "savsddp/errors.hpp"
#include "savsddp/lp_problem.hpp"

namespace savsddp::msslp {

/// One constraint row of a stage template:
///   sum_j own[j]*x_j + sum_k state[k]*s_k = rhs (+ noise)
/// where s is the previous stage's outgoing state vector.
struct StageRow {
  std::string id;
  std::vector<std::pair<int, double>> own;
  std::vector<std::pair<int, double>> state;
  double rhs = 0.0;
};

struct StageTemplate {
  int stage = 0;
  int var_count = 0;
  std::vector<double> lower, upper, cost;
  std::vector<std::string> var_names;  // optional; empty or per-variable
  std::vector<StageRow> rows;
  std::vector<int> state_out;  // ordered own-variable indices carried forward
  int state_in_dim = 0;        // previous stage's state_out size (x0 for stage 0)
};

/// Additive perturbation of a stage's right-hand side (and optionally cost).
struct NoiseRealization {
  std::vector<std::pair<int, double>> rhs_delta;   // (row index, delta)
  std::vector<std::pair<int, double>> cost_delta;  // (var index, delta)
};

/// Finite stage-wise-independent noise set; realizations are equiprobable.
struct NoiseSet {
  int stage = 0;
  std::vector<NoiseRealization> realizations;
};

/// Per-stage LP templates with state linkage. Stage 0 is deterministic and
/// receives the fixed initial state. Immutable once built; instantiation is
/// pure and safe to call concurrently.
struct StagedProblem {
  std::vector<StageTemplate> stages;
  std::vector<NoiseSet> noise;
  std::vector<double> initial_state;
  double theta_floor = 0.0;

  int num_stages() const { return static_cast<int>(stages.size()); }
  int n_realizations(int t) const {
    return static_cast<int>(noise[t].realizations.size());
  }
};

struct Diagnostic {
  std::string where;
  std::string message;
};

/// Structural diagnostics: dimension mismatches, empty noise sets,
/// non-chaining state slots. Empty result iff the problem is well-formed.
/// Side-effect free.
std::vector<Diagnostic> validate(const StagedProblem& problem);

/// Builds the stage-t LP for one noise realization and incoming state. Adds
/// the scalar cost-to-go variable (bounded below by theta_floor) and one
/// inequality row per cut, rewritten as an equality with a surplus variable;
/// the final stage carries no cost-to-go variable.
lp::LpProblem instantiate_subproblem(const StagedProblem& problem, int t,
                                     std::span<const double> state_in,
                                     int noise_index, const sddp::CutPool& cuts);

/// Index of the cost-to-go variable in an instantiated stage-t LP, -1 for the
/// final stage.
int theta_index(const StagedProblem& problem, int t);

/// Accumulates -B^T pi into g, where B is stage t's incoming-state coefficient
/// matrix and pi holds the duals of the template rows.
void accumulate_state_gradient(const StageTemplate& st, std::span<const double> pi,
                               std::span<double> g);

/// Thrown when an extensive form would exceed the scenario cap.
class ScenarioCapExceeded : public ValidationError {
 public:
  ScenarioCapExceeded(long long count, long long cap)
      : ValidationError("extensive form needs " + std::to_string(count) +
                        " scenarios, cap is " + std::to_string(cap)),
        count(count) {}
  long long count;
};

long long count_scenarios(const StagedProblem& problem, int from_stage);

/// Deterministic-equivalent LP over the full scenario tree with
/// probability-weighted objective; non-anticipativity holds by construction
/// through tree-structured variable copies. Its optimum equals the SAA
/// optimum exactly. Brute-force oracle, not a solution method.
lp::LpProblem extensive_form(const StagedProblem& problem, long long max_scenarios);

/// Extensive form of the tail problem starting at from_stage with a fixed
/// incoming state: its optimum is the exact expected cost-to-go
/// V_from(state_in) averaged over stage from_stage's realizations.
lp::LpProblem tail_extensive_form(const StagedProblem& problem, int from_stage,
                                  std::span<const double> state_in,
                                  long long max_scenarios);

}  // namespace savsddp::msslp
