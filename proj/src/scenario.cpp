#include "gridfreq/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "gridfreq/errors.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/simulation.hpp"

namespace gridfreq {

double AttackScenario::total_delta_mw() const {
  double total = 0.0;
  for (const AttackStep& s : steps) total += s.delta_mw;
  return total;
}

AttackScenario static_laa(const std::string& zone, double magnitude_mw, double t0_s) {
  if (magnitude_mw == 0.0) throw ValidationError("static_laa: magnitude must be nonzero");
  if (!(t0_s >= 0.0)) throw ValidationError("static_laa: t0 must be >= 0");
  AttackScenario scenario;
  scenario.label = "static";
  scenario.steps.push_back({t0_s, zone, magnitude_mw});
  return scenario;
}

AttackScenario dynamic_laa(const std::string& zone, double magnitude_mw,
                           const std::vector<double>& times_s) {
  if (magnitude_mw == 0.0) throw ValidationError("dynamic_laa: magnitude must be nonzero");
  if (times_s.empty()) throw ValidationError("dynamic_laa: times must be non-empty");
  for (std::size_t i = 0; i < times_s.size(); ++i) {
    if (!(times_s[i] >= 0.0)) throw ValidationError("dynamic_laa: times must be >= 0");
    if (i > 0 && !(times_s[i] > times_s[i - 1]))
      throw ValidationError("dynamic_laa: times must be strictly increasing");
  }
  AttackScenario scenario;
  scenario.label = "dynamic";
  const double per_step = magnitude_mw / static_cast<double>(times_s.size());
  double emitted = 0.0;
  for (std::size_t i = 0; i < times_s.size(); ++i) {
    // Last step absorbs rounding so the deltas sum to the magnitude exactly.
    const double delta = i + 1 == times_s.size() ? magnitude_mw - emitted : per_step;
    scenario.steps.push_back({times_s[i], zone, delta});
    emitted += delta;
  }
  return scenario;
}

LoadProfile::LoadProfile(const AttackScenario& scenario, double horizon_s, double dt_s) {
  if (!(dt_s > 0.0)) throw ValidationError("scenario_to_profile: dt must be > 0");
  for (const AttackStep& s : scenario.steps) {
    if (!(s.time_s < horizon_s))
      throw ValidationError("scenario_to_profile: step time must be < horizon");
  }
  for (const AttackStep& s : scenario.steps) {
    auto it = std::find(zones_.begin(), zones_.end(), s.zone);
    std::size_t z;
    if (it == zones_.end()) {
      zones_.push_back(s.zone);
      cumulative_.emplace_back();
      z = zones_.size() - 1;
    } else {
      z = static_cast<std::size_t>(it - zones_.begin());
    }
    const double prev = cumulative_[z].empty() ? 0.0 : cumulative_[z].back().second;
    cumulative_[z].emplace_back(s.time_s, prev + s.delta_mw);
  }
}

double LoadProfile::delta_mw(const std::string& zone, double t_s) const {
  auto it = std::find(zones_.begin(), zones_.end(), zone);
  if (it == zones_.end()) return 0.0;
  const auto& levels = cumulative_[static_cast<std::size_t>(it - zones_.begin())];
  double value = 0.0;
  for (const auto& [time, level] : levels) {
    if (time <= t_s) value = level;  // right-continuous staircase
  }
  return value;
}

double LoadProfile::total_delta_mw(double t_s) const {
  double total = 0.0;
  for (const std::string& zone : zones_) total += delta_mw(zone, t_s);
  return total;
}

LoadProfile scenario_to_profile(const AttackScenario& scenario, double horizon_s, double dt_s) {
  return LoadProfile(scenario, horizon_s, dt_s);
}

std::string to_string(AttackStrategy strategy) {
  return strategy == AttackStrategy::LargeScaleStatic ? "large-scale-static"
                                                      : "low-budget-dynamic";
}

AttackStrategy parse_strategy(const std::string& s) {
  if (s == "large-scale-static") return AttackStrategy::LargeScaleStatic;
  if (s == "low-budget-dynamic") return AttackStrategy::LowBudgetDynamic;
  throw ValidationError("adversary strategy must be \"large-scale-static\" or "
                        "\"low-budget-dynamic\" (got \"" + s + "\")");
}

AdversaryOutcome feedback_adversary(const NetworkModel& model, const AdversaryPolicy& policy,
                                    const SimulationConfig& config,
                                    const ProtectionPolicy& protection) {
  if (policy.vulnerable_zones.empty())
    throw ValidationError("adversary: vulnerable_zones must be non-empty");
  if (!(policy.budget_mw > 0.0)) throw ValidationError("adversary: budget_mw must be > 0");
  if (policy.max_iterations < 1) throw ValidationError("adversary: max_iterations must be >= 1");

  // Highest-demand vulnerable zone is the target.
  std::string target_zone;
  double best_demand = -1.0;
  for (const std::string& zone : policy.vulnerable_zones) {
    const auto z = model.zone_index(zone);
    if (!z) throw ValidationError("adversary: unknown vulnerable zone \"" + zone + "\"");
    if (model.zones[*z].demand_mw > best_demand) {
      best_demand = model.zones[*z].demand_mw;
      target_zone = zone;
    }
  }

  const Simulator sim(model, protection);
  auto breaches = [&](const AttackScenario& scenario) {
    const Trace trace = sim.run(scenario, config);
    return nadir(trace).first < policy.impact_target_hz;
  };

  AdversaryOutcome outcome;
  if (policy.strategy == AttackStrategy::LargeScaleStatic) {
    outcome.scenario = static_laa(target_zone, policy.budget_mw);
    outcome.iterations = 1;
    outcome.achieved = breaches(outcome.scenario);
    return outcome;
  }

  // Staged escalation: budget / max_iterations more per round until the
  // target breaches or the budget is spent.
  for (int k = 1; k <= policy.max_iterations; ++k) {
    const double magnitude = policy.budget_mw * k / policy.max_iterations;
    outcome.scenario = dynamic_laa(target_zone, magnitude);
    outcome.iterations = k;
    if (breaches(outcome.scenario)) {
      outcome.achieved = true;
      return outcome;
    }
  }
  outcome.achieved = false;
  return outcome;
}

}  // namespace gridfreq
