#include <doctest.h>

#include <algorithm>

#include "savsddp/msslp.hpp"
#include "savsddp/simplex.hpp"
#include "support/toy_problems.hpp"

using namespace savsddp;
using testing::three_stage_chain;
using testing::two_stage_chain;

TEST_CASE("validate accepts a well-formed two-stage problem") {
  const auto p = two_stage_chain();
  CHECK(msslp::validate(p).empty());
}

TEST_CASE("validate flags dimension mismatches and empty noise") {
  SUBCASE("state coefficient out of range") {
    auto p = two_stage_chain();
    p.stages[1].rows[0].state.emplace_back(4, 1.0);
    const auto diags = msslp::validate(p);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].where == "stage 1");
    CHECK(diags[0].message.find("state slot") != std::string::npos);
  }
  SUBCASE("state_in_dim does not chain") {
    auto p = two_stage_chain();
    p.stages[1].state_in_dim = 3;
    const auto diags = msslp::validate(p);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("chain") != std::string::npos);
  }
  SUBCASE("empty noise set") {
    auto p = two_stage_chain();
    p.noise[1].realizations.clear();
    const auto diags = msslp::validate(p);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].message == "empty noise set");
  }
  SUBCASE("validate has no side effects") {
    auto p = two_stage_chain();
    p.noise[1].realizations.clear();
    (void)msslp::validate(p);
    CHECK(p.noise[1].realizations.empty());
    CHECK(msslp::validate(p).size() == 1);
  }
}

TEST_CASE("instantiate_subproblem shapes") {
  const auto p = two_stage_chain({0.0, 1.0});
  sddp::CutPool pool(2);

  SUBCASE("final stage has no cost-to-go variable") {
    const auto lp0 = msslp::instantiate_subproblem(p, 1, std::vector<double>{2.0}, 0, pool);
    CHECK(lp0.num_vars() == 1);
    CHECK(msslp::theta_index(p, 1) == -1);
  }
  SUBCASE("k cuts add k rows, one surplus each, and one theta") {
    pool.append(0, {1, {0.5}, 3.0});
    pool.append(0, {1, {-0.25}, 1.0});
    const auto lp0 = msslp::instantiate_subproblem(p, 0, std::vector<double>{}, 0, pool);
    CHECK(lp0.num_vars() == 1 + 1 + 2);  // x, theta, two surpluses
    CHECK(lp0.num_rows() == 2);
    CHECK(msslp::theta_index(p, 0) == 1);
    CHECK(lp0.row_index("cut0") == 0);
    CHECK(lp0.row_index("cut1") == 1);
  }
  SUBCASE("zero state and zero noise leave the base rhs") {
    const auto lp0 = msslp::instantiate_subproblem(p, 1, std::vector<double>{0.0}, 0, pool);
    CHECK(lp0.row(0).rhs == 1.0);
    const auto lp1 = msslp::instantiate_subproblem(p, 1, std::vector<double>{0.0}, 1, pool);
    CHECK(lp1.row(0).rhs == 2.0);  // noise delta applied
    const auto lp2 = msslp::instantiate_subproblem(p, 1, std::vector<double>{2.5}, 0, pool);
    CHECK(lp2.row(0).rhs == doctest::Approx(3.5));  // minus B * state, B = -1
  }
  SUBCASE("bad indices are validation errors") {
    CHECK_THROWS_AS(
        msslp::instantiate_subproblem(p, 1, std::vector<double>{0.0}, 5, pool),
        ValidationError);
    CHECK_THROWS_AS(
        msslp::instantiate_subproblem(p, 1, std::vector<double>{0.0, 1.0}, 0, pool),
        ValidationError);
  }
}

TEST_CASE("extensive form of a deterministic problem equals the chained LP") {
  const auto p = two_stage_chain();
  const auto ef = msslp::extensive_form(p, 16);
  const auto out = lp::SimplexSolver().solve(ef);
  REQUIRE(out.status == lp::LpStatus::Optimal);

  // Chain built by hand: min x + y, y - x = 1.
  lp::LpProblem chain;
  chain.add_variable(0, 10, 1);
  chain.add_variable(0, lp::kInf, 1);
  chain.add_row("link", {{1, 1.0}, {0, -1.0}}, 1.0);
  const auto chain_out = lp::SimplexSolver().solve(chain);
  REQUIRE(chain_out.status == lp::LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(chain_out.objective).epsilon(1e-10));
  CHECK(out.objective == doctest::Approx(1.0));
}

TEST_CASE("extensive form weights a 2x2 tree by 1/4 per leaf") {
  // Hand value: x = 0, stage1 pays 1 + d1, stage2 pays stage1 + d2:
  // E = 1.5 + (1.5 + 1.5) = 4.5 with d1 in {0,1}, d2 in {0,3}.
  const auto p = three_stage_chain({0.0, 1.0}, {0.0, 3.0});
  CHECK(msslp::count_scenarios(p, 0) == 4);
  const auto ef = msslp::extensive_form(p, 4);
  const auto out = lp::SimplexSolver().solve(ef);
  REQUIRE(out.status == lp::LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(4.5).epsilon(1e-10));
}

TEST_CASE("extensive form optimum is invariant to realization order") {
  const auto a = three_stage_chain({0.0, 1.0}, {0.0, 3.0});
  const auto b = three_stage_chain({1.0, 0.0}, {3.0, 0.0});
  const auto va = lp::SimplexSolver().solve(msslp::extensive_form(a, 8)).objective;
  const auto vb = lp::SimplexSolver().solve(msslp::extensive_form(b, 8)).objective;
  CHECK(va == doctest::Approx(vb).epsilon(1e-12));
}

TEST_CASE("scenario cap refusal reports the computed count") {
  const auto p = three_stage_chain({0.0, 1.0}, {0.0, 3.0});
  try {
    (void)msslp::extensive_form(p, 3);
    FAIL("expected ScenarioCapExceeded");
  } catch (const msslp::ScenarioCapExceeded& e) {
    CHECK(e.count == 4);
    CHECK(std::string(e.what()).find("4") != std::string::npos);
  }
}

TEST_CASE("tail extensive form evaluates the expected cost-to-go") {
  const auto p = three_stage_chain({0.0, 1.0}, {0.0, 3.0});
  // From stage 1 with incoming x = 2: stage1 pays 2 + 1 + d1, stage2 pays
  // stage1 + d2. E = (3.5) + (3.5 + 1.5) = 8.5.
  const auto tail = msslp::tail_extensive_form(p, 1, std::vector<double>{2.0}, 8);
  const auto out = lp::SimplexSolver().solve(tail);
  REQUIRE(out.status == lp::LpStatus::Optimal);
  CHECK(out.objective == doctest::Approx(8.5).epsilon(1e-10));
}
