#include "gridfreq/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gridfreq/errors.hpp"
#include "gridfreq/hash.hpp"
#include "gridfreq/svg.hpp"

namespace gridfreq {

using json = nlohmann::ordered_json;

namespace {

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError(std::string(what) + ": invalid JSON");
  return j;
}

const json& member(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(ctx + ": missing field '" + key + "'");
  return *it;
}

double num(const json& j, const char* key, const std::string& ctx) {
  const json& v = member(j, key, ctx);
  if (!v.is_number()) throw ValidationError(ctx + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double num_or(const json& j, const char* key, double fallback, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw ValidationError(ctx + ": field '" + key + "' must be a number");
  return it->get<double>();
}

std::string str(const json& j, const char* key, const std::string& ctx) {
  const json& v = member(j, key, ctx);
  if (!v.is_string()) throw ValidationError(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& array(const json& j, const char* key, const std::string& ctx) {
  const json& v = member(j, key, ctx);
  if (!v.is_array()) throw ValidationError(ctx + ": field '" + key + "' must be an array");
  return v;
}

std::string idx(const char* name, std::size_t i) {
  std::ostringstream os;
  os << name << "[" << i << "]";
  return os.str();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

NetworkModel load_network(const std::string& text) {
  const json j = parse(text, "network");
  NetworkModel model;
  model.base_mva = num(j, "base_mva", "network");
  model.nominal_freq_hz = num(j, "nominal_freq", "network");

  for (std::size_t i = 0; i < array(j, "zones", "network").size(); ++i) {
    const json& zj = j["zones"][i];
    Zone z;
    z.id = str(zj, "id", idx("zones", i));
    z.demand_mw = num(zj, "demand", idx("zones", i));
    z.sheddable_fraction = num_or(zj, "sheddable_fraction", 0.05, idx("zones", i));
    model.zones.push_back(std::move(z));
  }
  for (std::size_t i = 0; i < array(j, "lines", "network").size(); ++i) {
    const json& lj = j["lines"][i];
    Line line;
    line.from = str(lj, "from", idx("lines", i));
    line.to = str(lj, "to", idx("lines", i));
    line.susceptance_pu = num(lj, "susceptance", idx("lines", i));
    line.rating_mw = num_or(lj, "rating", 0.0, idx("lines", i));
    model.lines.push_back(std::move(line));
  }
  for (std::size_t i = 0; i < array(j, "generators", "network").size(); ++i) {
    const json& gj = j["generators"][i];
    SyncGenerator g;
    g.zone = str(gj, "zone", idx("generators", i));
    g.rating_mva = num(gj, "rating", idx("generators", i));
    g.inertia_h_s = num(gj, "inertia_h", idx("generators", i));
    g.droop_pu = num_or(gj, "droop", 0.05, idx("generators", i));
    g.governor_tc_s = num_or(gj, "governor_tc", 8.0, idx("generators", i));
    g.headroom_mw = num_or(gj, "headroom", 0.0, idx("generators", i));
    g.damping_pu = num_or(gj, "damping", 1.0, idx("generators", i));
    model.generators.push_back(std::move(g));
  }
  if (j.contains("interconnectors")) {
    for (std::size_t i = 0; i < array(j, "interconnectors", "network").size(); ++i) {
      const json& ij = j["interconnectors"][i];
      Interconnector ic;
      ic.zone = str(ij, "zone", idx("interconnectors", i));
      ic.injection_mw = num(ij, "injection", idx("interconnectors", i));
      model.interconnectors.push_back(std::move(ic));
    }
  }
  if (j.contains("bess")) {
    for (std::size_t i = 0; i < array(j, "bess", "network").size(); ++i) {
      const json& bj = j["bess"][i];
      BessUnit u;
      u.zone = str(bj, "zone", idx("bess", i));
      u.rating_mw = num(bj, "rating_mw", idx("bess", i));
      u.mode = parse_service_mode(str(bj, "mode", idx("bess", i)));
      u.curve = default_curve(u.mode);
      u.curve.deadband_hz = num_or(bj, "deadband_hz", u.curve.deadband_hz, idx("bess", i));
      u.curve.full_deviation_hz =
          num_or(bj, "full_deviation_hz", u.curve.full_deviation_hz, idx("bess", i));
      u.activation_delay_s = num_or(bj, "activation_delay_s", 0.5, idx("bess", i));
      u.full_delivery_s = num_or(bj, "full_delivery_s", 1.0, idx("bess", i));
      auto it = bj.find("energy_capacity_mwh");
      if (it != bj.end() && !it->is_null()) u.energy_capacity_mwh = it->get<double>();
      model.bess_fleet.push_back(std::move(u));
    }
  }

  // Deterministic in-model ids for delivered-power columns.
  std::set<std::string> used_ids;
  for (BessUnit& u : model.bess_fleet) {
    if (u.id.empty()) {
      const std::string base = (u.mode == ServiceMode::DynamicContainment   ? "dc_"
                                : u.mode == ServiceMode::DynamicRegulation  ? "dr_"
                                                                            : "dm_") +
                               u.zone;
      std::string id = base;
      for (int k = 1; used_ids.count(id); ++k) id = base + "_" + std::to_string(k);
      u.id = id;
    }
    used_ids.insert(u.id);
  }

  validate(model);
  return model;
}

NetworkModel load_network_file(const std::string& path) {
  return load_network(read_file(path));
}

std::string serialize_network(const NetworkModel& model) {
  json j;
  j["base_mva"] = model.base_mva;
  j["nominal_freq"] = model.nominal_freq_hz;
  j["zones"] = json::array();
  for (const Zone& z : model.zones) {
    j["zones"].push_back(
        {{"id", z.id}, {"demand", z.demand_mw}, {"sheddable_fraction", z.sheddable_fraction}});
  }
  j["lines"] = json::array();
  for (const Line& line : model.lines) {
    j["lines"].push_back({{"from", line.from},
                          {"to", line.to},
                          {"susceptance", line.susceptance_pu},
                          {"rating", line.rating_mw}});
  }
  j["generators"] = json::array();
  for (const SyncGenerator& g : model.generators) {
    j["generators"].push_back({{"zone", g.zone},
                               {"rating", g.rating_mva},
                               {"inertia_h", g.inertia_h_s},
                               {"droop", g.droop_pu},
                               {"governor_tc", g.governor_tc_s},
                               {"headroom", g.headroom_mw},
                               {"damping", g.damping_pu}});
  }
  j["interconnectors"] = json::array();
  for (const Interconnector& ic : model.interconnectors) {
    j["interconnectors"].push_back({{"zone", ic.zone}, {"injection", ic.injection_mw}});
  }
  j["bess"] = json::array();
  for (const BessUnit& u : model.bess_fleet) {
    json bj = {{"zone", u.zone},
               {"rating_mw", u.rating_mw},
               {"mode", to_string(u.mode)},
               {"deadband_hz", u.curve.deadband_hz},
               {"full_deviation_hz", u.curve.full_deviation_hz},
               {"activation_delay_s", u.activation_delay_s},
               {"full_delivery_s", u.full_delivery_s}};
    bj["energy_capacity_mwh"] = u.energy_capacity_mwh ? json(*u.energy_capacity_mwh) : json();
    j["bess"].push_back(std::move(bj));
  }
  return j.dump(2) + "\n";
}

namespace {

ProtectionPolicy parse_protection(const json& j, const std::string& ctx) {
  ProtectionPolicy p;
  p.normal_band_hz = num_or(j, "normal_band_hz", p.normal_band_hz, ctx);
  p.statutory_band_hz = num_or(j, "statutory_band_hz", p.statutory_band_hz, ctx);
  p.ufls_threshold_hz = num_or(j, "ufls_threshold_hz", p.ufls_threshold_hz, ctx);
  p.shed_fraction = num_or(j, "shed_fraction", p.shed_fraction, ctx);
  p.ufls_confirm_s = num_or(j, "ufls_confirm_s", p.ufls_confirm_s, ctx);
  p.rocof_limit_pu_s = num_or(j, "rocof_limit_pu_s", p.rocof_limit_pu_s, ctx);
  p.rocof_window_s = num_or(j, "rocof_window_s", p.rocof_window_s, ctx);
  validate(p);
  return p;
}

json protection_json(const ProtectionPolicy& p) {
  return {{"normal_band_hz", p.normal_band_hz},
          {"statutory_band_hz", p.statutory_band_hz},
          {"ufls_threshold_hz", p.ufls_threshold_hz},
          {"shed_fraction", p.shed_fraction},
          {"ufls_confirm_s", p.ufls_confirm_s},
          {"rocof_limit_pu_s", p.rocof_limit_pu_s},
          {"rocof_window_s", p.rocof_window_s}};
}

}  // namespace

ScenarioFile load_scenario(const std::string& text) {
  const json j = parse(text, "scenario");
  ScenarioFile file;
  file.scenario.label = j.contains("label") ? str(j, "label", "scenario") : "";
  if (j.contains("steps")) {
    for (std::size_t i = 0; i < array(j, "steps", "scenario").size(); ++i) {
      const json& sj = j["steps"][i];
      AttackStep step;
      step.time_s = num(sj, "time_s", idx("steps", i));
      step.zone = str(sj, "zone", idx("steps", i));
      step.delta_mw = num(sj, "delta_mw", idx("steps", i));
      if (step.time_s < 0.0) throw ValidationError(idx("steps", i) + ".time_s must be >= 0");
      file.scenario.steps.push_back(std::move(step));
    }
  }
  for (std::size_t i = 1; i < file.scenario.steps.size(); ++i) {
    if (file.scenario.steps[i - 1].time_s > file.scenario.steps[i].time_s)
      throw ValidationError("scenario: steps must be sorted by time_s");
  }
  if (j.contains("adversary")) {
    const json& aj = j["adversary"];
    AdversaryPolicy policy;
    policy.budget_mw = num(aj, "budget_mw", "adversary");
    policy.strategy = parse_strategy(str(aj, "strategy", "adversary"));
    policy.impact_target_hz = num(aj, "impact_target_hz", "adversary");
    for (const json& z : array(aj, "vulnerable_zones", "adversary"))
      policy.vulnerable_zones.push_back(z.get<std::string>());
    policy.max_iterations =
        static_cast<int>(num_or(aj, "max_iterations", policy.max_iterations, "adversary"));
    file.adversary = std::move(policy);
  }
  if (j.contains("protection")) {
    file.protection = parse_protection(j["protection"], "protection");
    file.protection_overridden = true;
  }
  return file;
}

ScenarioFile load_scenario_file(const std::string& path) {
  return load_scenario(read_file(path));
}

std::string serialize_scenario(const ScenarioFile& file) {
  json j;
  j["label"] = file.scenario.label;
  j["steps"] = json::array();
  for (const AttackStep& s : file.scenario.steps)
    j["steps"].push_back({{"time_s", s.time_s}, {"zone", s.zone}, {"delta_mw", s.delta_mw}});
  if (file.adversary) {
    j["adversary"] = {{"budget_mw", file.adversary->budget_mw},
                      {"strategy", to_string(file.adversary->strategy)},
                      {"impact_target_hz", file.adversary->impact_target_hz},
                      {"vulnerable_zones", file.adversary->vulnerable_zones},
                      {"max_iterations", file.adversary->max_iterations}};
  }
  if (file.protection_overridden) j["protection"] = protection_json(file.protection);
  return j.dump(2) + "\n";
}

SweepSpec load_sweep_spec(const std::string& text) {
  const json j = parse(text, "sweep");
  SweepSpec spec;
  spec.label = j.contains("label") ? str(j, "label", "sweep") : "sweep";
  for (std::size_t i = 0; i < array(j, "cells", "sweep").size(); ++i) {
    const json& cj = j["cells"][i];
    SweepCell cell;
    const std::string kind = str(cj, "kind", idx("cells", i));
    if (kind == "run") {
      cell.kind = SweepCell::Kind::Run;
      cell.magnitude_mw = num(cj, "magnitude_mw", idx("cells", i));
      if (cj.contains("dynamic")) cell.dynamic = cj["dynamic"].get<bool>();
      if (cj.contains("step_times_s")) {
        cell.step_times_s.clear();
        for (const json& t : cj["step_times_s"]) cell.step_times_s.push_back(t.get<double>());
      }
    } else if (kind == "threshold") {
      cell.kind = SweepCell::Kind::Threshold;
      cell.limit_hz = num(cj, "limit_hz", idx("cells", i));
      if (cj.contains("bracket_mw")) {
        const json& b = cj["bracket_mw"];
        if (!b.is_array() || b.size() != 2)
          throw ValidationError(idx("cells", i) + ".bracket_mw must be [lo, hi]");
        cell.bracket_lo_mw = b[0].get<double>();
        cell.bracket_hi_mw = b[1].get<double>();
      }
      cell.tol_mw = num_or(cj, "tol_mw", cell.tol_mw, idx("cells", i));
    } else {
      throw ValidationError(idx("cells", i) + ".kind must be \"run\" or \"threshold\"");
    }
    cell.zone = str(cj, "zone", idx("cells", i));
    if (cj.contains("bess")) cell.bess = str(cj, "bess", idx("cells", i));
    spec.cells.push_back(std::move(cell));
  }
  return spec;
}

SweepSpec load_sweep_spec_file(const std::string& path) {
  return load_sweep_spec(read_file(path));
}

namespace {

json config_json(const SimulationConfig& config) {
  return {{"dt_s", config.dt_s},
          {"horizon_s", config.horizon_s},
          {"sample_every", config.sample_every}};
}

json sweep_cell_json(const SweepCell& cell) {
  json cj;
  cj["kind"] = cell.kind == SweepCell::Kind::Run ? "run" : "threshold";
  cj["bess"] = cell.bess;
  cj["zone"] = cell.zone;
  if (cell.kind == SweepCell::Kind::Run) {
    cj["magnitude_mw"] = cell.magnitude_mw;
    cj["dynamic"] = cell.dynamic;
    cj["step_times_s"] = cell.step_times_s;
  } else {
    cj["limit_hz"] = cell.limit_hz;
    cj["bracket_mw"] = {cell.bracket_lo_mw, cell.bracket_hi_mw};
    cj["tol_mw"] = cell.tol_mw;
  }
  return cj;
}

}  // namespace

std::string sweep_spec_fingerprint(const SweepSpec& spec, const SimulationConfig& config,
                                   const ProtectionPolicy& policy) {
  json j;
  j["label"] = spec.label;
  j["cells"] = json::array();
  for (const SweepCell& cell : spec.cells) j["cells"].push_back(sweep_cell_json(cell));
  j["config"] = config_json(config);
  j["protection"] = protection_json(policy);
  return j.dump();
}

std::string trace_to_csv(const Trace& trace) {
  std::string out;
  out.reserve(static_cast<std::size_t>(trace.n_samples()) * 16 *
              (3 + trace.zone_ids.size() + trace.bess_ids.size()));
  out += "time,coi_freq,shed_mw";
  for (const std::string& z : trace.zone_ids) out += ",f_" + z;
  for (const std::string& b : trace.bess_ids) out += ",p_bess_" + b;
  out += "\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    out += buf;
  };
  for (Index k = 0; k < trace.n_samples(); ++k) {
    put(trace.time_s[k]);
    out += ',';
    put(trace.coi_hz[k]);
    out += ',';
    put(trace.shed_mw[k]);
    for (Index z = 0; z < trace.freq_hz.cols(); ++z) {
      out += ',';
      put(trace.freq_hz(k, z));
    }
    for (Index b = 0; b < trace.bess_mw.cols(); ++b) {
      out += ',';
      put(trace.bess_mw(k, b));
    }
    out += '\n';
  }
  return out;
}

std::string events_to_json(const Trace& trace) {
  json j = json::array();
  for (const TraceEvent& e : trace.events) {
    json ej;
    ej["time_s"] = e.time_s;
    ej["kind"] = e.kind;
    if (e.kind == "attack_step") {
      ej["zone"] = e.zone;
      ej["delta_mw"] = e.value_mw;
    } else {
      ej["shed_mw"] = e.value_mw;
    }
    j.push_back(std::move(ej));
  }
  return j.dump(2) + "\n";
}

namespace {

json metrics_json(const FrequencyMetrics& m) {
  json j;
  j["nadir_hz"] = m.nadir_hz;
  j["nadir_time_s"] = m.nadir_time_s;
  j["max_rocof_pu_s"] = m.max_rocof_pu_s;
  j["max_rocof_zonal_pu_s"] = m.max_rocof_zonal_pu_s;
  j["settling_freq_hz"] = m.settling_freq_hz;
  json crossings;
  for (const auto& [edge, t] : m.first_crossing_s) crossings[fmt(edge)] = t;
  j["first_crossings_s"] = std::move(crossings);
  j["ufls_triggered"] = m.ufls_triggered;
  j["band"] = to_string(m.band);
  j["rocof_violation"] = m.rocof_violation;
  return j;
}

}  // namespace

std::string metrics_to_json(const FrequencyMetrics& metrics) {
  return metrics_json(metrics).dump(2) + "\n";
}

std::string threshold_to_json(const ThresholdResult& result) {
  json j;
  j["limit_hz"] = result.limit_hz;
  j["min_laa_mw"] = result.min_laa_mw;
  j["iterations"] = result.iterations;
  j["bracket_mw"] = {result.bracket_lo_mw, result.bracket_hi_mw};
  if (result.lo_metrics) j["lo_metrics"] = metrics_json(*result.lo_metrics);
  if (result.hi_metrics) j["hi_metrics"] = metrics_json(*result.hi_metrics);
  return j.dump(2) + "\n";
}

std::string sweep_to_json(const SweepResult& result) {
  json j;
  j["label"] = result.label;
  j["config_hash"] = result.config_hash;
  j["run_id"] = result.run_id;
  j["rows"] = json::array();
  for (const SweepRow& row : result.rows) {
    json rj;
    rj["cell"] = sweep_cell_json(row.cell);
    if (row.metrics) rj["metrics"] = metrics_json(*row.metrics);
    if (row.threshold) {
      rj["min_laa_mw"] = row.threshold->min_laa_mw;
      rj["iterations"] = row.threshold->iterations;
    }
    if (!row.error.empty()) rj["error"] = row.error;
    j["rows"].push_back(std::move(rj));
  }
  return j.dump(2) + "\n";
}

std::string hex16(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string run_id(const NetworkModel& model, const AttackScenario& scenario,
                   const SimulationConfig& config, const ProtectionPolicy& policy) {
  json j;
  j["label"] = scenario.label;
  j["steps"] = json::array();
  for (const AttackStep& s : scenario.steps)
    j["steps"].push_back({{"time_s", s.time_s}, {"zone", s.zone}, {"delta_mw", s.delta_mw}});
  j["config"] = config_json(config);
  j["protection"] = protection_json(policy);
  return hex16(fnv1a64(serialize_network(model) + j.dump()));
}

RunRecord write_run_artifacts(const NetworkModel& model, const AttackScenario& scenario,
                              const SimulationConfig& config, const ProtectionPolicy& policy,
                              const std::string& out_dir) {
  namespace fs = std::filesystem;
  RunRecord record;
  record.run_id = run_id(model, scenario, config, policy);
  const fs::path dir = fs::path(out_dir) / record.run_id;
  fs::create_directories(dir);

  const Trace trace = run(model, scenario, config, policy);
  record.metrics = compute_metrics(trace, policy, policy.rocof_window_s,
                                   std::min(10.0, config.horizon_s / 2.0));

  record.out_dir = dir.string();
  record.trace_csv_path = (dir / "trace.csv").string();
  record.metrics_json_path = (dir / "metrics.json").string();
  record.events_json_path = (dir / "events.json").string();
  record.plot_svg_path = (dir / "plot.svg").string();
  record.record_json_path = (dir / "run.json").string();

  write_file(record.trace_csv_path, trace_to_csv(trace));
  write_file(record.metrics_json_path, metrics_to_json(record.metrics));
  write_file(record.events_json_path, events_to_json(trace));
  write_file(record.plot_svg_path,
             render_run_svg(trace, model.total_demand_mw(),
                            scenario.label.empty() ? record.run_id : scenario.label));

  json rj;
  rj["run_id"] = record.run_id;
  rj["label"] = scenario.label;
  rj["created_unix_s"] = static_cast<long long>(std::time(nullptr));
  rj["artifacts"] = {{"trace_csv", record.trace_csv_path},
                     {"metrics_json", record.metrics_json_path},
                     {"events_json", record.events_json_path},
                     {"plot_svg", record.plot_svg_path}};
  write_file(record.record_json_path, rj.dump(2) + "\n");
  return record;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open \"" + path + "\" for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open \"" + path + "\" for writing");
  out << contents;
  if (!out) throw ValidationError("failed writing \"" + path + "\"");
}

}  // namespace gridfreq
