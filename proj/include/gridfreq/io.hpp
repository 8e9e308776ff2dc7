#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "gridfreq/metrics.hpp"
#include "gridfreq/network.hpp"
#include "gridfreq/protection.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/simulation.hpp"
#include "gridfreq/threshold.hpp"
#include "gridfreq/trace.hpp"

namespace gridfreq {

/// Parses and validates a network document. Errors name the offending field.
NetworkModel load_network(const std::string& text);
NetworkModel load_network_file(const std::string& path);

/// Canonical JSON form of a model; load_network(serialize_network(m)) yields
/// an equivalent model.
std::string serialize_network(const NetworkModel& model);

struct ScenarioFile {
  AttackScenario scenario;
  std::optional<AdversaryPolicy> adversary;
  ProtectionPolicy protection;  // defaults unless the file overrides them
  bool protection_overridden = false;
};

ScenarioFile load_scenario(const std::string& text);
ScenarioFile load_scenario_file(const std::string& path);
std::string serialize_scenario(const ScenarioFile& file);

SweepSpec load_sweep_spec(const std::string& text);
SweepSpec load_sweep_spec_file(const std::string& path);

/// Stable byte fingerprint of everything but the model; feeds config hashes.
std::string sweep_spec_fingerprint(const SweepSpec& spec, const SimulationConfig& config,
                                   const ProtectionPolicy& policy);

/// CSV export: header `time,coi_freq,shed_mw,f_<zoneid>...,p_bess_<unitid>...`,
/// one row per sample.
std::string trace_to_csv(const Trace& trace);
std::string events_to_json(const Trace& trace);
std::string metrics_to_json(const FrequencyMetrics& metrics);
std::string threshold_to_json(const ThresholdResult& result);
std::string sweep_to_json(const SweepResult& result);

/// Content hash binding a run to its inputs; identical inputs produce
/// identical ids.
std::string run_id(const NetworkModel& model, const AttackScenario& scenario,
                   const SimulationConfig& config, const ProtectionPolicy& policy);

struct RunRecord {
  std::string run_id;
  std::string out_dir;
  std::string trace_csv_path;
  std::string metrics_json_path;
  std::string events_json_path;
  std::string plot_svg_path;
  std::string record_json_path;
  FrequencyMetrics metrics;
};

/// Runs the scenario and persists every artifact (trace CSV, metrics
/// document, event log, SVG plot, run record) under out_dir/<run id>.
/// Artifacts other than the record carry no timestamps, so re-running
/// identical inputs reproduces them byte for byte.
RunRecord write_run_artifacts(const NetworkModel& model, const AttackScenario& scenario,
                              const SimulationConfig& config, const ProtectionPolicy& policy,
                              const std::string& out_dir);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace gridfreq
