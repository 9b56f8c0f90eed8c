#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace savsddp::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

/// One equality row: sum_j coeffs[j] * x_j = rhs. The id doubles as an opaque
/// tag callers use to locate the row's dual multiplier.
struct LpRow {
  std::string id;
  std::vector<std::pair<int, double>> coeffs;  // (variable index, value)
  double rhs = 0.0;
};

/// Standard-form LP: min c.x subject to A x = b, lower <= x <= upper.
/// Lower bounds are finite; upper bounds may be +inf. Immutable once handed
/// to a solver, safe to share across threads.
class LpProblem {
 public:
  int add_variable(double lower, double upper, double cost, std::string name = {});
  void add_row(std::string id, std::vector<std::pair<int, double>> coeffs, double rhs);

  int num_vars() const { return static_cast<int>(cost_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  const LpRow& row(int i) const { return rows_[i]; }

  double& mutable_cost(int j) { return cost_[j]; }
  double& mutable_rhs(int i) { return rows_[i].rhs; }

  const std::string& var_name(int j) const { return var_names_[j]; }

  /// Index of the row with the given id, -1 if absent.
  int row_index(const std::string& id) const;

  /// Throws ValidationError on dangling variable indices, inverted or
  /// non-finite bounds, non-finite coefficients, or duplicate row ids.
  void validate() const;

  bool operator==(const LpProblem& other) const;

 private:
  std::vector<double> cost_, lower_, upper_;
  std::vector<std::string> var_names_;
  std::vector<LpRow> rows_;
};

/// Basis snapshot: which variable is basic in each row position, and which
/// nonbasic variables rest at their upper bound. Returned with every optimal
/// outcome so later solves of a perturbed problem can start from it.
struct BasisState {
  std::vector<int> basic;          // size m
  std::vector<std::uint8_t> at_upper;  // size n, 1 = nonbasic at upper bound

  bool empty() const { return basic.empty() && at_upper.empty(); }
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> primal;        // per variable
  std::vector<double> dual;          // per row
  std::vector<double> reduced_cost;  // per variable
  BasisState basis;
  long long pivots = 0;
};

/// Plain-text dump for differential testing. One row per line in the format
///   row-id : coeff*var ... = rhs
/// preceded by objective and bound sections. Values are printed with
/// shortest-round-trip formatting, so parse_problem(dump_problem(p)) == p.
std::string dump_problem(const LpProblem& p);
LpProblem parse_problem(const std::string& text);

}  // namespace savsddp::lp
