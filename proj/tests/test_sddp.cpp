#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "savsddp/sddp.hpp"
#include "savsddp/simplex.hpp"
#include "support/toy_problems.hpp"

using namespace savsddp;
using testing::three_stage_chain;
using testing::two_stage_chain;

TEST_CASE("compute_cut arithmetic") {
  SUBCASE("single realization") {
    sddp::PerNoiseDual term{10.0, {3.0}, {{1.0}}};
    const auto cut = sddp::compute_cut({2.0}, {term});
    CHECK(cut.gradient[0] == doctest::Approx(-3.0));
    CHECK(cut.intercept == doctest::Approx(16.0));
  }
  SUBCASE("identical realizations average to the same cut") {
    sddp::PerNoiseDual term{10.0, {3.0}, {{1.0}}};
    const auto one = sddp::compute_cut({2.0}, {term});
    const auto two = sddp::compute_cut({2.0}, {term, term});
    CHECK(two.gradient[0] == doctest::Approx(one.gradient[0]));
    CHECK(two.intercept == doctest::Approx(one.intercept));
  }
  SUBCASE("zero duals give a constant floor") {
    sddp::PerNoiseDual a{4.0, {0.0}, {{1.0}}};
    sddp::PerNoiseDual b{6.0, {0.0}, {{1.0}}};
    const auto cut = sddp::compute_cut({7.0}, {a, b});
    CHECK(cut.gradient[0] == 0.0);
    CHECK(cut.intercept == doctest::Approx(5.0));
  }
  SUBCASE("dimension mismatch is rejected") {
    sddp::PerNoiseDual bad{1.0, {1.0, 2.0}, {{1.0}}};
    CHECK_THROWS_AS(sddp::compute_cut({0.0}, {bad}), ValidationError);
    CHECK_THROWS_AS(sddp::compute_cut({0.0}, {}), ValidationError);
  }
}

TEST_CASE("relative gap with clamping") {
  CHECK(sddp::relative_gap(100.0, 100.0) == 0.0);
  CHECK(sddp::relative_gap(99.0, 100.0) == doctest::Approx(0.01));
  CHECK(sddp::relative_gap(100.0, 99.5) == 0.0);
  CHECK_THROWS_AS(sddp::relative_gap(0.0, std::numeric_limits<double>::infinity()),
                  ValidationError);
}

TEST_CASE("upper bound estimator divides by sqrt(M)") {
  CHECK(sddp::upper_bound_estimate(100.0, 10.0, 25, 1.96) == doctest::Approx(103.92));
}

TEST_CASE("deterministic two-stage toy trains to the oracle in two iterations") {
  const auto p = two_stage_chain();
  const double oracle =
      lp::SimplexSolver().solve(msslp::extensive_form(p, 4)).objective;

  sddp::TrainOptions opts;
  opts.epsilon = 1e-9;
  opts.forward_paths = 2;
  opts.seed = 11;
  opts.verify_solves = true;
  sddp::SddpEngine engine(p, opts);
  const auto result = engine.train();
  CHECK(result.policy.converged);
  CHECK(result.policy.iterations <= 2);
  CHECK(result.policy.lower_bound == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("one backward pass closes a deterministic two-stage problem") {
  const auto p = two_stage_chain();
  const double oracle =
      lp::SimplexSolver().solve(msslp::extensive_form(p, 4)).objective;
  sddp::TrainOptions opts;
  opts.seed = 3;
  sddp::SddpEngine engine(p, opts);
  sddp::CutPool pool(2);
  Rng rng(1);
  const auto fwd = engine.forward_pass(pool, 1, rng);
  const auto bwd = engine.backward_pass(pool, fwd);
  CHECK(bwd.lower == doctest::Approx(oracle).epsilon(1e-9));
  REQUIRE(bwd.appended[0].size() == 1);
}

TEST_CASE("zero future cost appends a null cut") {
  auto p = two_stage_chain();
  p.stages[1].cost = {0.0};
  sddp::TrainOptions opts;
  sddp::SddpEngine engine(p, opts);
  sddp::CutPool pool(2);
  Rng rng(1);
  const auto fwd = engine.forward_pass(pool, 1, rng);
  const auto bwd = engine.backward_pass(pool, fwd);
  REQUIRE(bwd.appended[0].size() == 1);
  CHECK(bwd.appended[0][0].gradient[0] == doctest::Approx(0.0));
  CHECK(bwd.appended[0][0].intercept == doctest::Approx(0.0));
  CHECK(bwd.lower == doctest::Approx(0.0));  // stage-0 optimum alone
}

TEST_CASE("identical trial states append identical cuts") {
  const auto p = two_stage_chain();
  sddp::TrainOptions opts;
  sddp::SddpEngine engine(p, opts);
  sddp::CutPool pool(2);
  Rng rng(5);
  const auto fwd = engine.forward_pass(pool, 2, rng);  // deterministic: equal paths
  REQUIRE(fwd.states[0][0] == fwd.states[1][0]);
  const auto bwd = engine.backward_pass(pool, fwd);
  REQUIRE(bwd.appended[0].size() == 2);
  CHECK(bwd.appended[0][0].gradient == bwd.appended[0][1].gradient);
  CHECK(bwd.appended[0][0].intercept == bwd.appended[0][1].intercept);
}

TEST_CASE("deterministic forward pass has zero spread") {
  const auto p = two_stage_chain();
  sddp::TrainOptions opts;
  sddp::SddpEngine engine(p, opts);
  sddp::CutPool pool(2);
  Rng rng(17);
  const auto fwd = engine.forward_pass(pool, 4, rng);
  for (double v : fwd.objectives) CHECK(v == doctest::Approx(fwd.objectives[0]));
  CHECK(fwd.sd == 0.0);
  CHECK(fwd.upper == doctest::Approx(fwd.mean));
}

TEST_CASE("epsilon infinity stops after exactly one iteration") {
  const auto p = two_stage_chain({0.0, 1.0});
  sddp::TrainOptions opts;
  opts.epsilon = std::numeric_limits<double>::infinity();
  sddp::SddpEngine engine(p, opts);
  const auto result = engine.train();
  CHECK(result.policy.iterations == 1);
  CHECK(result.history.records.size() == 1);
}

TEST_CASE("same seed reproduces the bound history bit for bit") {
  const auto p = three_stage_chain({0.0, 1.0}, {0.0, 3.0});
  sddp::TrainOptions opts;
  opts.seed = 321;
  opts.max_iterations = 8;
  opts.epsilon = 0.0;
  const auto a = sddp::SddpEngine(p, opts).train();
  const auto b = sddp::SddpEngine(p, opts).train();
  REQUIRE(a.history.records.size() == b.history.records.size());
  for (size_t i = 0; i < a.history.records.size(); ++i) {
    CHECK(a.history.records[i].lower == b.history.records[i].lower);
    CHECK(a.history.records[i].upper == b.history.records[i].upper);
  }
  std::ostringstream ca, cb;
  a.history.write_csv(ca);
  b.history.write_csv(cb);
  CHECK(ca.str() == cb.str());
}

TEST_CASE("stochastic two-stage toy closes on the extensive form") {
  const auto p = two_stage_chain({0.0, 1.0});
  const double oracle =
      lp::SimplexSolver().solve(msslp::extensive_form(p, 4)).objective;
  sddp::TrainOptions opts;
  opts.epsilon = 1e-6;
  opts.max_iterations = 50;
  opts.seed = 7;
  opts.verify_solves = true;
  sddp::SddpEngine engine(p, opts);
  const auto result = engine.train();
  CHECK(result.policy.lower_bound == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(result.policy.lower_bound <= oracle + 1e-6);

  SUBCASE("lower bounds never decrease") {
    double prev = -1e300;
    for (const auto& r : result.history.records) {
      CHECK(r.lower >= prev);
      prev = r.lower;
    }
  }
  SUBCASE("evaluation lands near the optimum") {
    const auto stats = engine.evaluate(result.policy, 64, 99);
    CHECK(std::abs(stats.mean - oracle) <=
          3.0 * stats.sd / std::sqrt(64.0) + 1e-6);
    CHECK(stats.stage_mean.size() == 2);
  }
  SUBCASE("single path evaluation reports zero spread") {
    const auto stats = engine.evaluate(result.policy, 1, 99);
    CHECK(stats.sd == 0.0);
    CHECK(stats.paths == 1);
  }
  SUBCASE("deterministic evaluation mean equals the lower bound") {
    const auto pd = two_stage_chain();
    sddp::SddpEngine det(pd, opts);
    const auto r2 = det.train();
    const auto stats = det.evaluate(r2.policy, 8, 5);
    CHECK(stats.mean == doctest::Approx(r2.policy.lower_bound).epsilon(1e-9));
    CHECK(stats.sd == 0.0);
  }
}

TEST_CASE("cuts never overestimate the enumerated cost-to-go") {
  const auto p = three_stage_chain({0.0, 1.0}, {0.0, 3.0});
  sddp::TrainOptions opts;
  opts.max_iterations = 12;
  opts.epsilon = 0.0;
  opts.seed = 13;
  sddp::SddpEngine engine(p, opts);
  const auto result = engine.train();

  const lp::SimplexSolver solver;
  Rng rng(8);
  for (int stage = 0; stage < 2; ++stage) {
    for (const sddp::Cut& cut : result.policy.cuts.at(stage)) {
      for (int trial = 0; trial < 20; ++trial) {
        const std::vector<double> state{rng.uniform(0.0, 5.0)};
        const auto tail = msslp::tail_extensive_form(p, stage + 1, state, 8);
        const double exact = solver.solve(tail).objective;
        const double cut_value = cut.gradient[0] * state[0] + cut.intercept;
        CHECK(cut_value <= exact + 1e-6);
      }
    }
  }
}

TEST_CASE("train refuses problems that fail validation") {
  auto p = two_stage_chain();
  p.noise[1].realizations.clear();
  sddp::SddpEngine engine(p, {});
  CHECK_THROWS_AS(engine.train(), ValidationError);
}

TEST_CASE("infeasible subproblems surface as hard errors with coordinates") {
  // Stage 1 forces y <= 0.5 - x with y >= 1, infeasible once x is chosen.
  msslp::StagedProblem p = two_stage_chain();
  p.stages[1].lower = {1.0};
  p.stages[1].rows[0] = {"link", {{0, 1.0}}, {{0, 1.0}}, 0.5};
  sddp::SddpEngine engine(p, {});
  sddp::CutPool pool(2);
  Rng rng(1);
  try {
    (void)engine.forward_pass(pool, 1, rng);
    FAIL("expected SddpError");
  } catch (const SddpError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("stage 1") != std::string::npos);
    CHECK(msg.find("infeasible") != std::string::npos);
  }
}
