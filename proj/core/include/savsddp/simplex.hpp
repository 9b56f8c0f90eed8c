#pragma once

#include "savsddp/lp_problem.hpp"

namespace savsddp::lp {

/// Result of re-deriving optimality conditions from a problem/outcome pair,
/// independent of the solver's internal state.
struct VerificationReport {
  double primal_residual = 0.0;  // max |Ax-b| and bound violation
  double dual_residual = 0.0;    // reduced-cost sign violation at bounds
  double duality_gap = 0.0;      // |c.x - (b.pi + bound terms)|
  bool pass = false;

  static constexpr double kTol = 1e-6;
};

/// Bounded-variable revised simplex with a two-phase start. Dantzig pricing
/// with a Bland's-rule fallback after a degeneracy streak guarantees finite
/// termination; ties for entering/leaving variables break on the lowest
/// variable index, so solves are deterministic. The basis inverse is kept
/// explicitly and refreshed every refactor_interval pivots or when the primal
/// residual drifts.
///
/// A solver instance is single-use state-wise: solve() is const and
/// re-entrant, and distinct instances may run concurrently.
class SimplexSolver {
 public:
  struct Options {
    double pivot_tol = 1e-9;
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    double drift_tol = 1e-8;
    int refactor_interval = 100;
    int degeneracy_streak_limit = 25;
  };

  SimplexSolver() = default;
  explicit SimplexSolver(Options opts) : opts_(opts) {}

  /// Cold solve from a two-phase start. Deterministic: identical problems
  /// produce bit-identical outcomes. Throws ValidationError on malformed
  /// input.
  LpOutcome solve(const LpProblem& problem) const;

  /// Warm solve from a previous basis. Missing rows get their listed extra
  /// basic variables appended by the caller; if the hint is unusable
  /// (dimension mismatch, singular basis, neither primal nor dual feasible)
  /// the solver falls back to a cold solve, so the result is always valid.
  LpOutcome solve_with_hint(const LpProblem& problem, const BasisState& hint) const;

  /// Recomputes primal residual, reduced-cost sign consistency and the
  /// duality gap from the outcome. Throws ValidationError if the outcome is
  /// not Optimal.
  static VerificationReport verify_optimality(const LpProblem& problem,
                                              const LpOutcome& outcome);

  const Options& options() const { return opts_; }

 private:
  Options opts_;
};

}  // namespace savsddp::lp
