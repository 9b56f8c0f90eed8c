#include <doctest.h>

#include "savsddp/errors.hpp"
#include "savsddp/lp_problem.hpp"
#include "support/vertex_enum.hpp"

using namespace savsddp;

TEST_CASE("dump and parse round-trip exactly") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    lp::LpProblem p = testing::random_feasible_lp(rng);
    const std::string text = lp::dump_problem(p);
    const lp::LpProblem q = lp::parse_problem(text);
    CHECK(p == q);
    // Re-dumping the parse reproduces the bytes.
    CHECK(lp::dump_problem(q) == text);
  }
}

TEST_CASE("dump keeps infinite bounds and row shape") {
  lp::LpProblem p;
  p.add_variable(0, lp::kInf, -1.5, "x");
  p.add_variable(-2.25, 3.75, 0.1, "y");
  p.add_row("r0", {{0, 1.0}, {1, -0.5}}, 2.5);
  const std::string text = lp::dump_problem(p);
  CHECK(text.find("row r0 : 1*x0 -0.5*x1 = 2.5") != std::string::npos);
  CHECK(text.find("inf") != std::string::npos);
  CHECK(lp::parse_problem(text) == p);
}

TEST_CASE("parse rejects malformed text") {
  CHECK_THROWS_AS(lp::parse_problem("nonsense"), ValidationError);
  CHECK_THROWS_AS(lp::parse_problem("lp 1 vars 1\nminimize : bogus\n"), ValidationError);
}
