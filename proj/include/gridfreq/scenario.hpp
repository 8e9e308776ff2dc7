#pragma once

#include <string>
#include <vector>

#include "gridfreq/network.hpp"
#include "gridfreq/types.hpp"

namespace gridfreq {

struct SimulationConfig;  // simulation.hpp
struct ProtectionPolicy;  // protection.hpp

struct AttackStep {
  double time_s = 0.0;
  std::string zone;
  double delta_mw = 0.0;  // signed; positive = load increase
};

struct AttackScenario {
  std::string label;
  std::vector<AttackStep> steps;  // sorted by time

  double total_delta_mw() const;
};

/// Single load step of the given magnitude at t0.
AttackScenario static_laa(const std::string& zone, double magnitude_mw, double t0_s = 1.0);

/// The same total change split into equal steps at the given times; the last
/// step absorbs rounding so the deltas sum to the magnitude exactly.
AttackScenario dynamic_laa(const std::string& zone, double magnitude_mw,
                           const std::vector<double>& times_s = {1.0, 3.0, 6.0});

/// Right-continuous per-zone load-delta staircase: zero before the first
/// step, cumulative sum of deltas at or before t afterwards.
class LoadProfile {
 public:
  LoadProfile(const AttackScenario& scenario, double horizon_s, double dt_s);

  double delta_mw(const std::string& zone, double t_s) const;
  double total_delta_mw(double t_s) const;
  const std::vector<std::string>& zones() const { return zones_; }

 private:
  std::vector<std::string> zones_;
  std::vector<std::vector<std::pair<double, double>>> cumulative_;  // (time, level)
};

LoadProfile scenario_to_profile(const AttackScenario& scenario, double horizon_s, double dt_s);

enum class AttackStrategy { LargeScaleStatic, LowBudgetDynamic };

std::string to_string(AttackStrategy strategy);
AttackStrategy parse_strategy(const std::string& s);

struct AdversaryPolicy {
  double budget_mw = 0.0;
  std::vector<std::string> vulnerable_zones;
  AttackStrategy strategy = AttackStrategy::LargeScaleStatic;
  double impact_target_hz = 49.8;  // frequency limit to breach
  int max_iterations = 10;
};

struct AdversaryOutcome {
  AttackScenario scenario;
  bool achieved = false;
  int iterations = 0;
};

/// Feedback-driven attack construction: targets the highest-demand vulnerable
/// zone, proposes either the full budget at once (static) or an escalation of
/// budget/max_iterations per round (dynamic), simulates each proposal, and
/// stops at the first run whose COI nadir breaches the impact target or when
/// the budget is exhausted. Deterministic; the emitted magnitude never
/// exceeds the budget.
AdversaryOutcome feedback_adversary(const NetworkModel& model, const AdversaryPolicy& policy,
                                    const SimulationConfig& config,
                                    const ProtectionPolicy& protection);

}  // namespace gridfreq
