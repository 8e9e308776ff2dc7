#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "gridfreq/errors.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/simulation.hpp"
#include "gridfreq/threshold.hpp"

using namespace gridfreq;
using gridfreq::testing::load_gb36;
using gridfreq::testing::make_trace;
using gridfreq::testing::two_zone_model;

namespace {

std::vector<double> linear_series(double slope_hz_s, double total_s, double dt = 0.01) {
  std::vector<double> coi;
  const long n = std::llround(total_s / dt);
  for (long k = 0; k <= n; ++k) coi.push_back(50.0 + slope_hz_s * k * dt);
  return coi;
}

// Brute-force oracle: first magnitude on a 1 MW grid whose nadir breaches.
double sweep_oracle(const NetworkModel& m, const std::string& zone, double limit_hz,
                    double max_mw, const SimulationConfig& config) {
  const Simulator sim(m);
  for (double mw = 1.0; mw <= max_mw; mw += 1.0) {
    const Trace trace = sim.run(static_laa(zone, mw, 1.0), config);
    if (nadir(trace).first < limit_hz) return mw;
  }
  return -1.0;
}

}  // namespace

TEST_CASE("max_rocof on analytic series") {
  CHECK(max_rocof(make_trace(std::vector<double>(200, 50.0))) == 0.0);
  CHECK(max_rocof(make_trace(linear_series(-0.1, 5.0))) ==
        doctest::Approx(-0.1 / 50.0).epsilon(1e-9));

  // 50 Hz for t < 1, then linear to 49.5 at t = 2: slope -0.5 Hz/s inside the
  // ramp, so the windowed extreme is -0.01 p.u./s.
  std::vector<double> piecewise;
  for (long k = 0; k <= 300; ++k) {
    const double t = k * 0.01;
    piecewise.push_back(t < 1.0 ? 50.0 : t < 2.0 ? 50.0 - 0.5 * (t - 1.0) : 49.5);
  }
  CHECK(max_rocof(make_trace(piecewise)) == doctest::Approx(-0.01).epsilon(1e-9));

  CHECK_THROWS_AS(max_rocof(make_trace(linear_series(-0.1, 0.3))), ValidationError);
}

TEST_CASE("nadir finds the first minimum") {
  const Trace flat = make_trace(std::vector<double>(100, 50.0));
  CHECK(nadir(flat).first == 50.0);
  CHECK(nadir(flat).second == 0.0);

  // V-shaped fixture dipping to 49.49 at t = 12.89.
  std::vector<double> v;
  for (long k = 0; k <= 3000; ++k) {
    const double t = k * 0.01;
    v.push_back(t <= 12.89 ? 50.0 - 0.51 * t / 12.89
                           : 49.49 + 0.3 * (t - 12.89) / (30.0 - 12.89));
  }
  const auto [depth, when] = nadir(make_trace(v));
  CHECK(depth == doctest::Approx(49.49).epsilon(1e-12));
  CHECK(when == doctest::Approx(12.89).epsilon(1e-9));

  // Two equal minima: the earlier sample wins.
  std::vector<double> twin(100, 50.0);
  twin[30] = twin[60] = 49.7;
  CHECK(nadir(make_trace(twin)).second == doctest::Approx(0.30));

  CHECK_THROWS_AS(nadir(make_trace({})), ValidationError);
}

TEST_CASE("settling frequency is the tail mean") {
  CHECK(settling_frequency(make_trace(std::vector<double>(3000, 49.9))) ==
        doctest::Approx(49.9).epsilon(1e-12));

  // +-0.005 Hz ripple about 49.88 in the tail.
  std::vector<double> osc;
  for (long k = 0; k <= 3000; ++k)
    osc.push_back(49.88 + 0.005 * std::sin(0.4 * k * 0.01));
  CHECK(settling_frequency(make_trace(osc)) == doctest::Approx(49.88).epsilon(1e-4));

  CHECK_THROWS_AS(settling_frequency(make_trace(std::vector<double>(500, 49.9)), 10.0),
                  ValidationError);
}

TEST_CASE("static and dynamic attacks of equal size settle together") {
  const NetworkModel m = load_gb36();
  SimulationConfig config;
  config.horizon_s = 120.0;
  const double magnitude = 1200.0;
  const Trace st = run(m, static_laa("Z8", magnitude, 1.0), config);
  const Trace dy = run(m, dynamic_laa("Z8", magnitude), config);
  CHECK(std::abs(settling_frequency(st) - settling_frequency(dy)) < 0.01);
}

TEST_CASE("max_rocof with a pre-response window matches the analytic step slope") {
  const NetworkModel m = two_zone_model();
  SimulationConfig config;
  config.horizon_s = 20.0;
  const double dp = 150.0;
  const Trace trace = run(m, static_laa("Z1", dp, 1.0), config);
  const double expected = -dp * 50.0 / (2.0 * 10000.0) / 50.0;
  CHECK(max_rocof(trace, 0.1) == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("bisection agrees with the 1 MW brute-force sweep") {
  SimulationConfig config;
  config.horizon_s = 40.0;
  const double limit = 49.8;

  SUBCASE("two-zone fixture") {
    const NetworkModel m = two_zone_model();
    const double oracle = sweep_oracle(m, "Z2", limit, 400.0, config);
    REQUIRE(oracle > 0.0);
    const ThresholdResult bisect = find_min_laa(m, "Z2", limit, {0.0, 400.0}, 1.0, config, {});
    CHECK(std::abs(bisect.min_laa_mw - oracle) <= 1.0);
    CHECK(bisect.iterations <= static_cast<int>(std::ceil(std::log2(400.0 / 1.0))) + 2);
    // The breaching endpoint really breaches, the other endpoint does not.
    CHECK(bisect.hi_metrics->nadir_hz < limit);
    CHECK(bisect.lo_metrics->nadir_hz >= limit);
  }

  SUBCASE("five-zone fixture") {
    std::mt19937_64 rng(77);
    const NetworkModel m = gridfreq::testing::random_model(rng, 5);
    const std::string zone = m.zones[3].id;
    const double oracle = sweep_oracle(m, zone, limit, 600.0, config);
    REQUIRE(oracle > 0.0);
    const ThresholdResult bisect = find_min_laa(m, zone, limit, {0.0, 600.0}, 1.0, config, {});
    CHECK(std::abs(bisect.min_laa_mw - oracle) <= 1.0);
  }
}

TEST_CASE("degenerate brackets return hi untouched") {
  const NetworkModel m = two_zone_model();
  SimulationConfig config;
  config.horizon_s = 10.0;
  const ThresholdResult r = find_min_laa(m, "Z1", 49.8, {0.0, 0.5}, 1.0, config, {});
  CHECK(r.min_laa_mw == 0.5);
  CHECK(r.iterations == 0);
  CHECK(!r.lo_metrics.has_value());
}

TEST_CASE("invalid brackets report both endpoint nadirs") {
  const NetworkModel m = two_zone_model();
  SimulationConfig config;
  config.horizon_s = 30.0;
  try {
    find_min_laa(m, "Z1", 49.8, {0.0, 10.0}, 1.0, config, {});  // hi far too small
    FAIL("expected BracketError");
  } catch (const BracketError& e) {
    CHECK(e.lo_nadir_hz == doctest::Approx(50.0).epsilon(1e-6));
    CHECK(e.hi_nadir_hz > 49.8);
    CHECK(std::string(e.what()).find("does not straddle") != std::string::npos);
  }
  CHECK_THROWS_AS(find_min_laa(m, "Z1", 49.8, {10.0, 10.0}, 1.0, config, {}), ValidationError);
}

TEST_CASE("threshold limits nest: tighter limits need no more power") {
  const NetworkModel m = two_zone_model();
  SimulationConfig config;
  config.horizon_s = 40.0;
  const double t_normal = find_min_laa(m, "Z2", 49.8, {0.0, 600.0}, 1.0, config, {}).min_laa_mw;
  const double t_statutory =
      find_min_laa(m, "Z2", 49.5, {0.0, 600.0}, 1.0, config, {}).min_laa_mw;
  CHECK(t_normal <= t_statutory);
}

TEST_CASE("sweep_tables evaluates cells independently and survives bad cells") {
  const NetworkModel m = load_gb36();
  SimulationConfig config;
  config.horizon_s = 30.0;

  SweepSpec spec;
  spec.label = "unit";
  SweepCell run_cell;
  run_cell.kind = SweepCell::Kind::Run;
  run_cell.bess = "paper-500";
  run_cell.zone = "Z8";
  run_cell.magnitude_mw = 880.68;
  SweepCell bad_cell = run_cell;
  bad_cell.zone = "Z99";
  SweepCell dyn_cell = run_cell;
  dyn_cell.dynamic = true;
  spec.cells = {run_cell, bad_cell, dyn_cell};

  const SweepResult result = sweep_tables(m, spec, config, {});
  REQUIRE(result.rows.size() == 3);
  CHECK(result.rows[0].error.empty());
  CHECK(result.rows[0].metrics.has_value());
  CHECK(!result.rows[1].error.empty());
  CHECK(result.rows[2].error.empty());
  // The dynamic variant is gentler on the nadir than the one-shot step.
  CHECK(result.rows[2].metrics->nadir_hz > result.rows[0].metrics->nadir_hz);

  // Rows are reproducible in isolation.
  SweepSpec only;
  only.label = "unit";
  only.cells = {run_cell};
  const SweepResult again = sweep_tables(m, only, config, {});
  CHECK(again.rows[0].metrics->nadir_hz == result.rows[0].metrics->nadir_hz);

  CHECK(sweep_tables(m, {"empty", {}}, config, {}).rows.empty());
  CHECK(!render_table(result).empty());
}

TEST_CASE("fleet placement comparison: co-located and spread fleets both carry the event") {
  // Fleet mass concentrated in the attacked zone against the spread layout.
  // With a 0.5 s activation delay the pre-delay transient is placement-
  // invariant, so the two layouts may only differ in the sustained phase.
  const NetworkModel m = load_gb36();
  SimulationConfig config;
  config.horizon_s = 60.0;

  std::vector<BessUnit> local;
  for (int k = 0; k < 2; ++k) {
    BessUnit u;
    u.id = k == 0 ? "dr_Z8" : "dc_Z8";
    u.zone = "Z8";
    u.rating_mw = 250.0;
    u.mode = k == 0 ? ServiceMode::DynamicRegulation : ServiceMode::DynamicContainment;
    u.curve = default_curve(u.mode);
    local.push_back(u);
  }
  const AttackScenario scenario = static_laa("Z8", 1541.20, 1.0);
  const Trace none = run(m, scenario, config);
  const Trace at_zone = run(with_fleet(m, local), scenario, config);
  const Trace spread = run(with_fleet(m, fleet_preset("paper-500")), scenario, config);

  // Either placement beats no support at all.
  CHECK(nadir(at_zone).first > nadir(none).first);
  CHECK(nadir(spread).first > nadir(none).first);
  // The worst COI window closes before the activation delay elapses, so it
  // is identical with or without support.
  CHECK(max_rocof(at_zone) == max_rocof(none));
  // Equal total support settles equally regardless of placement.
  CHECK(std::abs(settling_frequency(at_zone) - settling_frequency(spread)) < 0.02);
  // Placement-invariant first swing: both fleets sit out the activation delay.
  CHECK(nadir(at_zone).first == doctest::Approx(nadir(spread).first).epsilon(2e-4));
}
