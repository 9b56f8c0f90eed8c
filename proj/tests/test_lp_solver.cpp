#include <doctest.h>

#include <cmath>

#include "savsddp/errors.hpp"
#include "savsddp/simplex.hpp"
#include "support/vertex_enum.hpp"

using namespace savsddp;
using lp::LpProblem;
using lp::LpStatus;
using lp::SimplexSolver;

namespace {

LpProblem spec_example() {
  // min -x1 - 2 x2 s.t. x1 + x2 + s = 3, all vars >= 0
  LpProblem p;
  p.add_variable(0, lp::kInf, -1, "x1");
  p.add_variable(0, lp::kInf, -2, "x2");
  p.add_variable(0, lp::kInf, 0, "s");
  p.add_row("cap", {{0, 1.0}, {1, 1.0}, {2, 1.0}}, 3.0);
  return p;
}

}  // namespace

TEST_CASE("basic optimum with duals") {
  const LpProblem p = spec_example();
  // Oracle agrees before we assert the frozen values.
  const auto oracle = testing::enumerate_optimum(p);
  REQUIRE(oracle.has_value());

  // s has no upper bound; enumerate_optimum needs finite boxes only when the
  // optimum could escape, which it cannot here (all costs nonnegative for s).
  const auto out = SimplexSolver().solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(-6.0).epsilon(1e-9));
  CHECK(out.objective == doctest::Approx(*oracle).epsilon(1e-9));
  CHECK(out.primal[0] == doctest::Approx(0.0));
  CHECK(out.primal[1] == doctest::Approx(3.0));
  CHECK(out.primal[2] == doctest::Approx(0.0));
  CHECK(out.dual[0] == doctest::Approx(-2.0));
}

TEST_CASE("infeasible by bound contradiction") {
  LpProblem p;
  p.add_variable(0, lp::kInf, 1, "x1");
  p.add_row("fix", {{0, 1.0}}, -1.0);
  const auto out = SimplexSolver().solve(p);
  CHECK(out.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded without rows") {
  LpProblem p;
  p.add_variable(0, lp::kInf, -1, "x1");
  const auto out = SimplexSolver().solve(p);
  CHECK(out.status == LpStatus::Unbounded);
}

TEST_CASE("validation errors are not solve statuses") {
  LpProblem dangling;
  dangling.add_variable(0, 1, 1);
  dangling.add_row("r", {{3, 1.0}}, 0.0);
  CHECK_THROWS_AS(SimplexSolver().solve(dangling), ValidationError);

  LpProblem inverted;
  inverted.add_variable(2, 1, 1);
  CHECK_THROWS_AS(SimplexSolver().solve(inverted), ValidationError);

  LpProblem dup;
  dup.add_variable(0, 1, 1);
  dup.add_row("a", {{0, 1.0}}, 0.0);
  dup.add_row("a", {{0, 1.0}}, 0.0);
  CHECK_THROWS_AS(SimplexSolver().solve(dup), ValidationError);
}

TEST_CASE("verify_optimality passes on a clean solve and localizes damage") {
  const LpProblem p = spec_example();
  auto out = SimplexSolver().solve(p);
  REQUIRE(out.status == LpStatus::Optimal);

  auto rep = SimplexSolver::verify_optimality(p, out);
  CHECK(rep.pass);
  CHECK(rep.duality_gap == doctest::Approx(0.0).epsilon(1e-10));

  SUBCASE("perturbed primal fails on the primal residual") {
    auto bad = out;
    bad.primal[1] += 0.1;
    const auto r = SimplexSolver::verify_optimality(p, bad);
    CHECK_FALSE(r.pass);
    CHECK(r.primal_residual == doctest::Approx(0.1).epsilon(1e-9));
  }
  SUBCASE("perturbed dual fails on the duality gap") {
    auto bad = out;
    bad.dual[0] += 0.1;
    const auto r = SimplexSolver::verify_optimality(p, bad);
    CHECK_FALSE(r.pass);
    // Gap moves by the perturbation times the rhs.
    CHECK(r.duality_gap == doctest::Approx(0.1 * 3.0).epsilon(1e-6));
  }
  SUBCASE("non-optimal outcomes are rejected") {
    auto bad = out;
    bad.status = LpStatus::Infeasible;
    CHECK_THROWS_AS(SimplexSolver::verify_optimality(p, bad), ValidationError);
  }
}

TEST_CASE("oracle equivalence on random bounded LPs") {
  Rng rng(20240517);
  const SimplexSolver solver;
  int optimal = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const LpProblem p = testing::random_feasible_lp(rng);
    const auto oracle = testing::enumerate_optimum(p);
    REQUIRE(oracle.has_value());
    const auto out = solver.solve(p);
    REQUIRE(out.status == LpStatus::Optimal);
    ++optimal;
    CHECK(std::abs(out.objective - *oracle) <= 1e-6 * (1.0 + std::abs(*oracle)));
    const auto rep = SimplexSolver::verify_optimality(p, out);
    CHECK(rep.pass);
  }
  CHECK(optimal == 200);
}

TEST_CASE("solves are bit-identical across repeats") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const LpProblem p = testing::random_feasible_lp(rng);
    const auto a = SimplexSolver().solve(p);
    const auto b = SimplexSolver().solve(p);
    REQUIRE(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.primal == b.primal);
    CHECK(a.dual == b.dual);
    CHECK(a.reduced_cost == b.reduced_cost);
  }
}

TEST_CASE("degenerate cycling instance terminates") {
  // Beale's example: cycles under naive Dantzig pricing without an
  // anti-cycling rule.
  LpProblem p;
  p.add_variable(0, lp::kInf, -0.75, "x1");
  p.add_variable(0, lp::kInf, 150, "x2");
  p.add_variable(0, lp::kInf, -0.02, "x3");
  p.add_variable(0, lp::kInf, 6, "x4");
  p.add_variable(0, lp::kInf, 0, "s1");
  p.add_variable(0, lp::kInf, 0, "s2");
  p.add_variable(0, lp::kInf, 0, "s3");
  p.add_row("r1", {{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}, {4, 1.0}}, 0.0);
  p.add_row("r2", {{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}, {5, 1.0}}, 0.0);
  p.add_row("r3", {{2, 1.0}, {6, 1.0}}, 1.0);
  const auto out = SimplexSolver().solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("upper-bounded variables and redundant rows") {
  LpProblem p;
  p.add_variable(0, 2, -1, "x");
  p.add_variable(0, 3, -1, "y");
  p.add_row("sum", {{0, 1.0}, {1, 1.0}}, 4.0);
  p.add_row("sum2", {{0, 2.0}, {1, 2.0}}, 8.0);  // dependent duplicate
  const auto out = SimplexSolver().solve(p);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(-4.0));
  const auto rep = SimplexSolver::verify_optimality(p, out);
  CHECK(rep.pass);
}

TEST_CASE("warm start from a previous basis matches the cold result") {
  Rng rng(4242);
  const SimplexSolver solver;
  for (int trial = 0; trial < 30; ++trial) {
    LpProblem p = testing::random_feasible_lp(rng);
    const auto cold = solver.solve(p);
    REQUIRE(cold.status == LpStatus::Optimal);

    // Perturb only the rhs, restart from the optimal basis.
    LpProblem q = p;
    for (int i = 0; i < q.num_rows(); ++i) q.mutable_rhs(i) += rng.uniform(-0.2, 0.2);
    const auto warm = solver.solve_with_hint(q, cold.basis);
    const auto fresh = solver.solve(q);
    REQUIRE(warm.status == fresh.status);
    if (warm.status == LpStatus::Optimal) {
      CHECK(warm.objective == doctest::Approx(fresh.objective).epsilon(1e-8));
      const auto rep = SimplexSolver::verify_optimality(q, warm);
      CHECK(rep.pass);
    }
  }
}
