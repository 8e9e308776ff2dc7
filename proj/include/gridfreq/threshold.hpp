#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridfreq/metrics.hpp"
#include "gridfreq/network.hpp"
#include "gridfreq/simulation.hpp"

namespace gridfreq {

struct ThresholdResult {
  double limit_hz = 0.0;
  double min_laa_mw = 0.0;  // smallest magnitude found to breach, within tol
  int iterations = 0;       // midpoint evaluations
  double bracket_lo_mw = 0.0;
  double bracket_hi_mw = 0.0;
  std::optional<FrequencyMetrics> lo_metrics;  // final non-breaching endpoint
  std::optional<FrequencyMetrics> hi_metrics;  // final breaching endpoint
};

/// Returns a copy of the model with the given BESS fleet installed.
NetworkModel with_fleet(const NetworkModel& model, std::vector<BessUnit> fleet);

/// Bisection for the smallest static load step at the given zone whose COI
/// nadir drops below limit_hz. The bracket must straddle the boundary:
/// run(lo) may not breach and run(hi) must (BracketError otherwise, carrying
/// both endpoint nadirs). A bracket no wider than tol returns hi without
/// running. Magnitude 0 means no attack.
ThresholdResult find_min_laa(const NetworkModel& model, const std::string& zone, double limit_hz,
                             std::pair<double, double> bracket_mw, double tol_mw,
                             const SimulationConfig& config, const ProtectionPolicy& policy = {});

struct SweepCell {
  enum class Kind { Run, Threshold };
  Kind kind = Kind::Run;
  std::string bess = "none";  // fleet preset name, or "model" for the model's own fleet
  std::string zone;
  // Run cells
  double magnitude_mw = 0.0;
  bool dynamic = false;
  std::vector<double> step_times_s = {1.0, 3.0, 6.0};
  // Threshold cells
  double limit_hz = 49.8;
  double bracket_lo_mw = 0.0;
  double bracket_hi_mw = 6000.0;
  double tol_mw = 1.0;
};

struct SweepSpec {
  std::string label;
  std::vector<SweepCell> cells;
};

struct SweepRow {
  SweepCell cell;
  std::optional<FrequencyMetrics> metrics;
  std::optional<ThresholdResult> threshold;
  std::string error;  // per-cell failure; the sweep continues past it
};

struct SweepResult {
  std::string label;
  std::string config_hash;  // inputs except the model
  std::string run_id;       // model + spec + config
  std::vector<SweepRow> rows;
};

/// Evaluates every cell (concurrently; results assembled in spec order).
/// Per-cell errors are captured in the row rather than aborting the sweep.
SweepResult sweep_tables(const NetworkModel& model, const SweepSpec& spec,
                         const SimulationConfig& config, const ProtectionPolicy& policy = {});

/// Aligned plain-text rendering of a sweep result.
std::string render_table(const SweepResult& result);

}  // namespace gridfreq
