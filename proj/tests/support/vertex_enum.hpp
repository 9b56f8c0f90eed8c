#pragma once

#include <optional>

#include "savsddp/lp_problem.hpp"
#include "savsddp/rng.hpp"

namespace savsddp::testing {

/// Brute-force LP oracle for small instances with finite bounds: enumerates
/// every basic solution (all basis subsets times all lower/upper assignments
/// of the nonbasic variables) and returns the best feasible objective.
/// Independent of the simplex implementation path.
std::optional<double> enumerate_optimum(const lp::LpProblem& p);

/// A random feasible, bounded LP with at most max_vars variables and max_rows
/// equality rows: the rhs is assembled from a random interior point, so the
/// instance is feasible by construction, and all bounds are finite.
lp::LpProblem random_feasible_lp(Rng& rng, int max_vars = 6, int max_rows = 4);

}  // namespace savsddp::testing
