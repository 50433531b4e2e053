#include <doctest.h>

#include <cmath>

#include "driftlab/error.hpp"
#include "driftlab/processes.hpp"
#include "driftlab/simulation.hpp"

using namespace drift;

TEST_SUITE("simulation") {
  TEST_CASE("window validation") {
    const DriftWindow w(2.0, 7.5);
    CHECK(w.ell() == 5.5);
    CHECK_THROWS_AS(DriftWindow(3.0, 3.0), ConfigError);
    CHECK_THROWS_AS(DriftWindow(4.0, 1.0), ConfigError);
  }

  TEST_CASE("deterministic walk hits after ell steps") {
    const auto p = constant_step_walk(10.0, -1.0);
    const Trajectory t = run_trial(*p, DriftWindow(0.0, 10.0), 100, 1, Recording::full);
    REQUIRE(t.hit_time.has_value());
    CHECK(*t.hit_time == 10);
    CHECK_FALSE(t.truncated);
    REQUIRE(t.potentials.size() == 11);
    CHECK(t.potentials.back() == 0.0);
    for (std::size_t s = 0; s < 10; ++s) CHECK(t.potentials[s] > 0.0);
  }

  TEST_CASE("truncation and preconditions") {
    const auto up = constant_step_walk(10.0, 1.0);
    const Trajectory t = run_trial(*up, DriftWindow(0.0, 10.0), 50, 1);
    CHECK_FALSE(t.hit_time.has_value());
    CHECK(t.truncated);
    CHECK(t.potentials.size() == 1);
    CHECK_THROWS_AS(run_trial(*up, DriftWindow(0.0, 11.0), 50, 1), ConfigError);
    CHECK_THROWS_AS(run_trial(*up, DriftWindow(0.0, 10.0), 0, 1), ConfigError);
  }

  TEST_CASE("results do not depend on the thread count") {
    const auto p = geometric_drift_walk(0.2, 1.0, 8.0);
    const SimulationBudget budget{5000, 97, 123};
    const auto a = run_trials(*p, DriftWindow(0.0, 8.0), budget, 1);
    const auto b = run_trials(*p, DriftWindow(0.0, 8.0), budget, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].hit_time == b[i].hit_time);
      CHECK(a[i].truncated == b[i].truncated);
    }
  }

  TEST_CASE("counterexample hitting probability") {
    // Oracle: (1 - e^{-15})^15 = 0.99999541147501796.
    const auto p = counterexample_chain(15);
    const HittingEstimate est = estimate_hitting_probability(*p, DriftWindow(0.0, 15.0), {15, 10000, 15}, 15);
    CHECK(est.trials == 10000);
    CHECK(est.point >= 0.999);
    CHECK(est.ci_high >= 0.99999541147501796);
  }

  TEST_CASE("horizon zero and horizon above budget") {
    const auto p = constant_step_walk(5.0, -1.0);
    const HittingEstimate none = estimate_hitting_probability(*p, DriftWindow(0.0, 5.0), {10, 20, 1}, 0);
    CHECK(none.hits == 0);
    CHECK_THROWS_AS(estimate_hitting_probability(*p, DriftWindow(0.0, 5.0), {10, 20, 1}, 11), ConfigError);
  }

  TEST_CASE("summarize hits uses the horizon") {
    const auto p = constant_step_walk(5.0, -1.0);
    const auto runs = run_trials(*p, DriftWindow(0.0, 5.0), {10, 4, 1});
    CHECK(summarize_hits(runs, 4).hits == 0);
    CHECK(summarize_hits(runs, 5).hits == 4);
  }

  TEST_CASE("harvested jumps split by domain") {
    const auto p = constant_step_walk(6.0, -1.0);
    const JumpSamples s = harvest_jumps(*p, DriftWindow(0.0, 4.0), {100, 3, 1});
    // States 6,5,4,3,2,1 step down; drift domain ]0,4[ holds 3,2,1.
    CHECK(s.tail.size() == 18);
    CHECK(s.drift.size() == 9);
    for (double d : s.tail) CHECK(d == -1.0);
  }

  TEST_CASE("thread count resolution") {
    CHECK(resolve_thread_count(3) == 3);
    CHECK(resolve_thread_count(0) >= 1);
  }
}
