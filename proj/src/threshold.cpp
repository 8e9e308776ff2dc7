#include "gridfreq/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

#include "gridfreq/errors.hpp"
#include "gridfreq/hash.hpp"
#include "gridfreq/io.hpp"
#include "gridfreq/scenario.hpp"

namespace gridfreq {

NetworkModel with_fleet(const NetworkModel& model, std::vector<BessUnit> fleet) {
  NetworkModel out = model;
  out.bess_fleet = std::move(fleet);
  validate(out);
  return out;
}

namespace {

AttackScenario magnitude_scenario(const std::string& zone, double magnitude_mw, bool dynamic,
                                  const std::vector<double>& times) {
  if (magnitude_mw == 0.0) return {};  // no disturbance
  return dynamic ? dynamic_laa(zone, magnitude_mw, times) : static_laa(zone, magnitude_mw);
}

}  // namespace

ThresholdResult find_min_laa(const NetworkModel& model, const std::string& zone, double limit_hz,
                             std::pair<double, double> bracket_mw, double tol_mw,
                             const SimulationConfig& config, const ProtectionPolicy& policy) {
  auto [lo, hi] = bracket_mw;
  if (!(lo >= 0.0) || !(hi > lo)) throw ValidationError("threshold: bracket requires 0 <= lo < hi");
  if (!(tol_mw > 0.0)) throw ValidationError("threshold: tol must be > 0");
  if (!model.zone_index(zone)) throw ValidationError("threshold: unknown zone \"" + zone + "\"");

  ThresholdResult result;
  result.limit_hz = limit_hz;
  result.bracket_lo_mw = lo;
  result.bracket_hi_mw = hi;

  if (hi - lo <= tol_mw) {
    result.min_laa_mw = hi;  // nothing to bisect
    return result;
  }

  const Simulator sim(model, policy);
  auto evaluate = [&](double magnitude) {
    const Trace trace = sim.run(magnitude_scenario(zone, magnitude, false, {}), config);
    return compute_metrics(trace, policy);
  };

  FrequencyMetrics lo_m = evaluate(lo);
  FrequencyMetrics hi_m = evaluate(hi);
  const auto breaches = [&](const FrequencyMetrics& m) { return m.nadir_hz < limit_hz; };
  if (breaches(lo_m) || !breaches(hi_m)) {
    std::ostringstream os;
    os << "threshold: bracket [" << lo << ", " << hi << "] MW does not straddle the " << limit_hz
       << " Hz boundary (lo nadir " << lo_m.nadir_hz << " Hz, hi nadir " << hi_m.nadir_hz
       << " Hz)";
    throw BracketError(os.str(), lo_m.nadir_hz, hi_m.nadir_hz);
  }

  while (hi - lo > tol_mw) {
    const double mid = 0.5 * (lo + hi);
    const FrequencyMetrics mid_m = evaluate(mid);
    ++result.iterations;
    if (breaches(mid_m)) {
      hi = mid;
      hi_m = mid_m;
    } else {
      lo = mid;
      lo_m = mid_m;
    }
  }

  result.min_laa_mw = hi;
  result.lo_metrics = lo_m;
  result.hi_metrics = hi_m;
  return result;
}

namespace {

SweepRow evaluate_cell(const NetworkModel& model, const SweepCell& cell,
                       const SimulationConfig& config, const ProtectionPolicy& policy) {
  SweepRow row;
  row.cell = cell;
  try {
    const NetworkModel variant =
        cell.bess == "model" ? model : with_fleet(model, fleet_preset(cell.bess));
    if (cell.kind == SweepCell::Kind::Threshold) {
      row.threshold = find_min_laa(variant, cell.zone, cell.limit_hz,
                                   {cell.bracket_lo_mw, cell.bracket_hi_mw}, cell.tol_mw, config,
                                   policy);
      row.metrics = row.threshold->hi_metrics;
    } else {
      const Trace trace =
          run(variant, magnitude_scenario(cell.zone, cell.magnitude_mw, cell.dynamic,
                                          cell.step_times_s),
              config, policy);
      row.metrics = compute_metrics(trace, policy);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

SweepResult sweep_tables(const NetworkModel& model, const SweepSpec& spec,
                         const SimulationConfig& config, const ProtectionPolicy& policy) {
  SweepResult result;
  result.label = spec.label;
  result.config_hash = hex16(fnv1a64(sweep_spec_fingerprint(spec, config, policy)));
  result.run_id =
      hex16(fnv1a64(serialize_network(model) + sweep_spec_fingerprint(spec, config, policy)));

  std::vector<std::future<SweepRow>> futures;
  futures.reserve(spec.cells.size());
  for (const SweepCell& cell : spec.cells) {
    futures.push_back(std::async(std::launch::async, [&model, cell, &config, &policy] {
      return evaluate_cell(model, cell, config, policy);
    }));
  }
  result.rows.reserve(spec.cells.size());
  for (auto& f : futures) result.rows.push_back(f.get());
  return result;
}

std::string render_table(const SweepResult& result) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"#", "kind", "bess", "zone", "limit/laa", "min_laa_mw", "rocof_pu_s",
                   "rocof_zonal", "nadir_hz", "nadir_t_s", "settle_hz", "ufls", "error"});
  char buf[64];
  auto fmt = [&](double v, const char* spec = "%.4g") {
    std::snprintf(buf, sizeof(buf), spec, v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    const bool threshold = row.cell.kind == SweepCell::Kind::Threshold;
    std::vector<std::string> line;
    line.push_back(std::to_string(i));
    line.push_back(threshold ? "threshold" : (row.cell.dynamic ? "run-dyn" : "run"));
    line.push_back(row.cell.bess);
    line.push_back(row.cell.zone);
    line.push_back(fmt(threshold ? row.cell.limit_hz : row.cell.magnitude_mw, "%.6g"));
    line.push_back(row.threshold ? fmt(row.threshold->min_laa_mw, "%.6g") : "-");
    if (row.metrics) {
      line.push_back(fmt(row.metrics->max_rocof_pu_s));
      line.push_back(fmt(row.metrics->max_rocof_zonal_pu_s));
      line.push_back(fmt(row.metrics->nadir_hz, "%.6g"));
      line.push_back(fmt(row.metrics->nadir_time_s, "%.5g"));
      line.push_back(fmt(row.metrics->settling_freq_hz, "%.6g"));
      line.push_back(row.metrics->ufls_triggered ? "yes" : "no");
    } else {
      for (int k = 0; k < 6; ++k) line.push_back("-");
    }
    line.push_back(row.error.empty() ? "-" : row.error);
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());

  std::ostringstream os;
  os << "sweep " << result.label << "  config_hash=" << result.config_hash
     << "  run_id=" << result.run_id << "\n";
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      os << line[c];
      if (c + 1 < line.size()) os << std::string(width[c] - line[c].size() + 2, ' ');
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace gridfreq
