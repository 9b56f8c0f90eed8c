#include <doctest.h>

#include <cmath>
#include <sstream>

#include "savsddp/errors.hpp"
#include "savsddp/scenario.hpp"

using namespace savsddp;
using scenario::make_demand_spec;
using scenario::sample_noise;

namespace {

sav::DemandSpec base_spec(double rate, double halfwidth) {
  return make_demand_spec(1000.0, rate, {{2, 10}, {5, 10}},
                          {{0, 1}, {1, 0}, {0, 2}}, halfwidth, 16, 42);
}

double cell_sum(const sav::DemandSpec& spec) {
  double s = 0.0;
  for (const auto& dep : spec.departures) {
    for (const auto& od : dep.od) s += od.expected;
  }
  return s;
}

}  // namespace

TEST_CASE("demand allocation partitions the total") {
  const auto spec = base_spec(0.5, 0.2);
  CHECK(cell_sum(spec) == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(spec.booking_rate == 0.5);
  // Pre-booked and on-demand expectations split by the rate.
  CHECK(0.5 * cell_sum(spec) == doctest::Approx(500.0));

  SUBCASE("boundary rates") {
    CHECK(base_spec(0.0, 0.2).booking_rate == 0.0);
    CHECK(base_spec(1.0, 0.2).booking_rate == 1.0);
  }
  SUBCASE("same seed gives identical tables") {
    const auto again = base_spec(0.5, 0.2);
    for (size_t d = 0; d < spec.departures.size(); ++d) {
      for (size_t o = 0; o < spec.departures[d].od.size(); ++o) {
        CHECK(spec.departures[d].od[o].expected ==
              again.departures[d].od[o].expected);
      }
    }
  }
  SUBCASE("different seeds differ") {
    const auto other = make_demand_spec(1000.0, 0.5, {{2, 10}}, {{0, 1}, {1, 0}},
                                        0.2, 16, 43);
    CHECK(other.departures[0].od[0].expected !=
          doctest::Approx(spec.departures[0].od[0].expected));
  }
  SUBCASE("no OD pairs with positive demand is an error") {
    CHECK_THROWS_AS(make_demand_spec(10.0, 0.5, {{2, 5}}, {}, 0.2, 8, 1),
                    ValidationError);
  }
}

TEST_CASE("noise samples stay inside the uniform support") {
  sav::DemandSpec spec;
  spec.horizon = 8;
  spec.booking_rate = 0.0;
  spec.noise_halfwidth = 0.2;
  spec.departures = {{2, 6, {{0, 1, 100.0}}}};

  const auto set = sample_noise(spec, 2, 500, 9);
  REQUIRE(set.realizations.size() == 500);
  for (const auto& r : set.realizations) {
    REQUIRE(r.cells.size() == 1);
    CHECK(r.cells[0].quantity >= 80.0);
    CHECK(r.cells[0].quantity <= 120.0);
  }

  SUBCASE("zero halfwidth collapses to the expectation") {
    spec.noise_halfwidth = 0.0;
    const auto det = sample_noise(spec, 2, 5, 9);
    REQUIRE(det.realizations.size() == 5);
    for (const auto& r : det.realizations) CHECK(r.cells[0].quantity == 100.0);
  }
  SUBCASE("empirical mean approaches the expectation") {
    const auto big = sample_noise(spec, 2, 100000, 123);
    double mean = 0.0;
    for (const auto& r : big.realizations) mean += r.cells[0].quantity;
    mean /= static_cast<double>(big.realizations.size());
    CHECK(std::abs(mean - 100.0) <= 1.0);  // 1% of U
  }
}

TEST_CASE("stage roles: pre-booked table at 1, departures at k, zero elsewhere") {
  sav::DemandSpec spec;
  spec.horizon = 8;
  spec.booking_rate = 0.5;
  spec.noise_halfwidth = 0.2;
  spec.departures = {{2, 6, {{0, 1, 100.0}}}, {4, 7, {{1, 0, 60.0}}}};

  const auto s1 = sample_noise(spec, 1, 4, 7);
  REQUIRE(s1.realizations.size() == 4);
  CHECK(s1.realizations[0].cells.size() == 2);  // full table
  for (const auto& c : s1.realizations[0].cells) {
    const double expect = 0.5 * (c.k == 2 ? 100.0 : 60.0);
    CHECK(c.quantity >= 0.8 * expect);
    CHECK(c.quantity <= 1.2 * expect);
  }

  const auto s4 = sample_noise(spec, 4, 4, 7);
  REQUIRE(s4.realizations.size() == 4);
  REQUIRE(s4.realizations[0].cells.size() == 1);
  CHECK(s4.realizations[0].cells[0].k == 4);

  const auto s3 = sample_noise(spec, 3, 4, 7);
  REQUIRE(s3.realizations.size() == 1);  // deterministic stage
  CHECK(s3.realizations[0].cells.empty());

  SUBCASE("booking rate 1 leaves departure stages deterministic") {
    spec.booking_rate = 1.0;
    const auto s = sample_noise(spec, 2, 4, 7);
    REQUIRE(s.realizations.size() == 1);
    CHECK(s.realizations[0].cells.empty());
  }
  SUBCASE("per-stage streams are independent of call order") {
    const auto direct = sample_noise(spec, 4, 4, 7);
    (void)sample_noise(spec, 1, 50, 7);
    (void)sample_noise(spec, 2, 50, 7);
    const auto after = sample_noise(spec, 4, 4, 7);
    REQUIRE(direct.realizations.size() == after.realizations.size());
    for (size_t n = 0; n < direct.realizations.size(); ++n) {
      CHECK(direct.realizations[n].cells[0].quantity ==
            after.realizations[n].cells[0].quantity);
    }
  }
}

TEST_CASE("noise csv export") {
  sav::DemandSpec spec;
  spec.horizon = 4;
  spec.booking_rate = 0.0;
  spec.noise_halfwidth = 0.0;
  spec.departures = {{2, 4, {{0, 1, 10.0}}}};
  const auto sets = scenario::sample_all_noise(spec, 2, 3);
  std::ostringstream out;
  scenario::write_noise_csv(sets, out);
  const std::string text = out.str();
  CHECK(text.rfind("stage,realization,origin,dest,quantity\n", 0) == 0);
  CHECK(text.find("2,0,0,1,10\n") != std::string::npos);
  CHECK(text.find("2,1,0,1,10\n") != std::string::npos);
}
