#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gridfreq/errors.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/simulation.hpp"
#include "gridfreq/threshold.hpp"

using namespace gridfreq;
using gridfreq::testing::load_gb36;
using gridfreq::testing::two_zone_model;

TEST_CASE("static_laa emits one step at the requested time") {
  const AttackScenario s1 = static_laa("Z8", 660.0, 1.0);
  REQUIRE(s1.steps.size() == 1);
  CHECK(s1.steps[0].time_s == 1.0);
  CHECK(s1.steps[0].zone == "Z8");
  CHECK(s1.steps[0].delta_mw == 660.0);

  const AttackScenario s2 = static_laa("Z1", 880.68, 1.0);
  CHECK(s2.steps[0].delta_mw == 880.68);

  CHECK_THROWS_AS(static_laa("Z8", 0.0, 1.0), ValidationError);
}

TEST_CASE("dynamic_laa splits the magnitude with an exact total") {
  const AttackScenario s = dynamic_laa("Z8", 1541.20, {1.0, 3.0, 6.0});
  REQUIRE(s.steps.size() == 3);
  CHECK(s.steps[0].delta_mw == doctest::Approx(1541.20 / 3.0).epsilon(1e-12));
  CHECK(s.total_delta_mw() == 1541.20);  // exact, last step absorbs rounding

  const AttackScenario even = dynamic_laa("Z8", 900.0, {1.0, 3.0, 6.0});
  for (const AttackStep& step : even.steps) CHECK(step.delta_mw == 300.0);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const double magnitude = uniform(rng, -4000.0, 4000.0);
    if (magnitude == 0.0) continue;
    const AttackScenario r = dynamic_laa("Z1", magnitude, {0.5, 2.5, 4.0, 9.0});
    CHECK(std::abs(r.total_delta_mw() - magnitude) <= 1e-9);
  }

  CHECK_THROWS_AS(dynamic_laa("Z8", 900.0, {1.0, 1.0, 6.0}), ValidationError);
  CHECK_THROWS_AS(dynamic_laa("Z8", 900.0, {3.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(dynamic_laa("Z8", 0.0), ValidationError);
}

TEST_CASE("scenario_to_profile builds the right-continuous staircase") {
  SUBCASE("static step") {
    const LoadProfile p = scenario_to_profile(static_laa("Z8", 660.0, 1.0), 180.0, 0.01);
    CHECK(p.delta_mw("Z8", 0.0) == 0.0);
    CHECK(p.delta_mw("Z8", 0.999) == 0.0);
    CHECK(p.delta_mw("Z8", 1.0) == 660.0);  // right-continuous at the step
    CHECK(p.delta_mw("Z8", 179.0) == 660.0);
    CHECK(p.delta_mw("Z1", 50.0) == 0.0);
  }
  SUBCASE("dynamic staircase 0/300/600/900") {
    const LoadProfile p = scenario_to_profile(dynamic_laa("Z8", 900.0), 180.0, 0.01);
    CHECK(p.total_delta_mw(0.5) == 0.0);
    CHECK(p.total_delta_mw(2.0) == 300.0);
    CHECK(p.total_delta_mw(4.0) == 600.0);
    CHECK(p.total_delta_mw(7.0) == 900.0);
  }
  SUBCASE("empty scenario is identically zero") {
    const LoadProfile p = scenario_to_profile({}, 180.0, 0.01);
    CHECK(p.total_delta_mw(90.0) == 0.0);
  }
  SUBCASE("step times beyond the horizon are rejected") {
    CHECK_THROWS_AS(scenario_to_profile(static_laa("Z8", 100.0, 10.0), 5.0, 0.01),
                    ValidationError);
  }
}

TEST_CASE("static and dynamic profiles of equal magnitude agree past the last step") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const double magnitude = uniform(rng, 100.0, 3000.0);
    const LoadProfile st = scenario_to_profile(static_laa("Z8", magnitude, 1.0), 180.0, 0.01);
    const LoadProfile dy = scenario_to_profile(dynamic_laa("Z8", magnitude), 180.0, 0.01);
    for (double t : {6.0, 6.01, 20.0, 179.0}) {
      CHECK(dy.delta_mw("Z8", t) == doctest::Approx(st.delta_mw("Z8", t)).epsilon(1e-12));
    }
    CHECK(dy.delta_mw("Z8", 5.99) < st.delta_mw("Z8", 5.99));  // staged before then
  }
}

TEST_CASE("profile conservation: the final level equals the summed deltas") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    AttackScenario s;
    double t = 0.0;
    const int n = uniform_int(rng, 1, 6);
    for (int k = 0; k < n; ++k) {
      t += uniform(rng, 0.1, 5.0);
      s.steps.push_back({t, k % 2 ? "Z1" : "Z2", uniform(rng, -500.0, 500.0)});
    }
    const LoadProfile p = scenario_to_profile(s, 100.0, 0.01);
    CHECK(p.total_delta_mw(99.0) == doctest::Approx(s.total_delta_mw()).epsilon(1e-12));
  }
}

TEST_CASE("load-decrease attacks mirror load increases in the linear band") {
  const NetworkModel m = load_gb36();
  SimulationConfig config;
  config.horizon_s = 30.0;
  const Trace up = run(m, static_laa("Z8", 200.0, 1.0), config);
  const Trace down = run(m, static_laa("Z8", -200.0, 1.0), config);
  CHECK(((up.coi_hz.array() - 50.0) + (down.coi_hz.array() - 50.0)).abs().maxCoeff() < 1e-6);
}

TEST_CASE("feedback adversary achieves a soft target inside budget") {
  const NetworkModel m = load_gb36();
  SimulationConfig config;
  config.horizon_s = 60.0;
  AdversaryPolicy policy;
  policy.budget_mw = 2000.0;
  policy.vulnerable_zones = {"Z8", "Z3", "Z15"};
  policy.strategy = AttackStrategy::LargeScaleStatic;
  policy.impact_target_hz = 49.8;

  const AdversaryOutcome outcome = feedback_adversary(m, policy, config, {});
  CHECK(outcome.achieved);
  CHECK(outcome.scenario.total_delta_mw() <= policy.budget_mw + 1e-9);
  CHECK(outcome.scenario.steps[0].zone == "Z8");  // highest demand among candidates

  // Cross-check against the threshold finder on the same model.
  const ThresholdResult t =
      find_min_laa(m, "Z8", 49.8, {0.0, policy.budget_mw}, 1.0, config, {});
  CHECK(t.min_laa_mw <= policy.budget_mw);
}

TEST_CASE("a negligible budget fails after max_iterations") {
  const NetworkModel m = two_zone_model();
  SimulationConfig config;
  config.horizon_s = 20.0;
  AdversaryPolicy policy;
  policy.budget_mw = 1.0;
  policy.vulnerable_zones = {"Z1"};
  policy.strategy = AttackStrategy::LowBudgetDynamic;
  policy.impact_target_hz = 48.8;
  policy.max_iterations = 4;

  const AdversaryOutcome outcome = feedback_adversary(m, policy, config, {});
  CHECK(!outcome.achieved);
  CHECK(outcome.iterations == 4);
  CHECK(outcome.scenario.total_delta_mw() <= 1.0 + 1e-12);
}

TEST_CASE("a single vulnerable zone is always the chosen target") {
  const NetworkModel m = two_zone_model();
  SimulationConfig config;
  config.horizon_s = 10.0;
  AdversaryPolicy policy;
  policy.budget_mw = 50.0;
  policy.vulnerable_zones = {"Z2"};
  policy.strategy = AttackStrategy::LargeScaleStatic;
  policy.impact_target_hz = 49.99;
  const AdversaryOutcome outcome = feedback_adversary(m, policy, config, {});
  CHECK(outcome.scenario.steps[0].zone == "Z2");

  policy.vulnerable_zones = {};
  CHECK_THROWS_AS(feedback_adversary(m, policy, config, {}), ValidationError);
}

TEST_CASE("the dynamic adversary escalates deterministically") {
  const NetworkModel m = two_zone_model();
  SimulationConfig config;
  config.horizon_s = 25.0;
  AdversaryPolicy policy;
  policy.budget_mw = 200.0;
  policy.vulnerable_zones = {"Z1", "Z2"};
  policy.strategy = AttackStrategy::LowBudgetDynamic;
  policy.impact_target_hz = 49.9;
  policy.max_iterations = 8;

  const AdversaryOutcome a = feedback_adversary(m, policy, config, {});
  const AdversaryOutcome b = feedback_adversary(m, policy, config, {});
  CHECK(a.achieved == b.achieved);
  CHECK(a.iterations == b.iterations);
  CHECK(a.scenario.total_delta_mw() == b.scenario.total_delta_mw());
  if (a.achieved) {
    // Escalation stops at the first breaching magnitude.
    CHECK(a.scenario.total_delta_mw() ==
          doctest::Approx(policy.budget_mw * a.iterations / policy.max_iterations));
  }
}
