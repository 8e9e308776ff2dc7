// gridfreq command line: synthesize networks, run load-step scenarios, search
// attack thresholds, and evaluate study sweeps.
//
// Exit codes: 0 ok, 2 validation/usage error, 3 requested breach detected,
// 4 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "gridfreq/errors.hpp"
#include "gridfreq/io.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/network.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/simulation.hpp"
#include "gridfreq/synth.hpp"
#include "gridfreq/threshold.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBreach = 3;
constexpr int kExitNumerical = 4;

std::string default_out_dir() {
  const char* env = std::getenv("GRIDFREQ_OUT");
  return env && *env ? env : "runs";
}

void print_metrics_row(const std::string& run_id, const gridfreq::FrequencyMetrics& m) {
  std::printf("run %s  nadir=%.4f Hz @ %.3f s  rocof=%.5f pu/s  zonal=%.5f pu/s  "
              "settle=%.4f Hz  band=%s  ufls=%s\n",
              run_id.c_str(), m.nadir_hz, m.nadir_time_s, m.max_rocof_pu_s,
              m.max_rocof_zonal_pu_s, m.settling_freq_hz, gridfreq::to_string(m.band).c_str(),
              m.ufls_triggered ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gridfreq;

  CLI::App app{"deterministic multi-zone grid frequency simulator and load-attack "
               "study harness"};
  app.require_subcommand(1);

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic GB-36-like network file");
  std::uint64_t seed = 1;
  std::string synth_out = "gb36-synthetic.json";
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("-o,--output", synth_out, "output network file");

  // ---- shared run/threshold/sweep options ----
  std::string network_path, scenario_path, bess = "model", out_dir = default_out_dir();
  SimulationConfig config;
  auto add_common = [&](CLI::App* cmd, bool needs_network = true) {
    if (needs_network)
      cmd->add_option("-n,--network", network_path, "network file")->required();
    cmd->add_option("--dt", config.dt_s, "integration step (s)");
    cmd->add_option("--horizon", config.horizon_s, "simulation horizon (s)");
    cmd->add_option("--sample-every", config.sample_every, "steps between trace samples");
    cmd->add_option("--out", out_dir, "output directory (default $GRIDFREQ_OUT or ./runs)");
  };

  // ---- run ----
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario and write artifacts");
  add_common(run_cmd);
  std::string zone = "Z8", label;
  double magnitude = 0.0, at = 1.0, fail_on_breach = 0.0;
  bool dynamic = false;
  std::vector<double> times = {1.0, 3.0, 6.0};
  run_cmd->add_option("-s,--scenario", scenario_path, "scenario file");
  run_cmd->add_option("--zone", zone, "attacked zone for inline scenarios");
  run_cmd->add_option("--magnitude", magnitude, "inline load-step magnitude (MW)");
  run_cmd->add_option("--at", at, "inline static step time (s)");
  run_cmd->add_flag("--dynamic", dynamic, "split the inline magnitude over --times");
  run_cmd->add_option("--times", times, "inline dynamic step times (s)")->expected(-1);
  run_cmd->add_option("--bess", bess, "fleet preset (none|model|paper-400|paper-500|paper-600|"
                                      "paper-500-dc|paper-500-dr)");
  run_cmd->add_option("--label", label, "scenario label override");
  run_cmd->add_option("--fail-on-breach", fail_on_breach,
                      "exit 3 if the COI nadir drops below this limit (Hz)");

  // ---- threshold ----
  auto* thr_cmd = app.add_subcommand("threshold", "bisect the minimum breaching load step");
  add_common(thr_cmd);
  double limit = 49.8, tol = 1.0;
  std::vector<double> bracket = {0.0, 6000.0};
  thr_cmd->add_option("--zone", zone, "attacked zone");
  thr_cmd->add_option("--limit", limit, "frequency limit (Hz)");
  thr_cmd->add_option("--bracket", bracket, "bracket lo hi (MW)")->expected(2);
  thr_cmd->add_option("--tol", tol, "bisection tolerance (MW)");
  thr_cmd->add_option("--bess", bess, "fleet preset");

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a sweep spec file");
  add_common(sweep_cmd);
  std::string spec_path;
  sweep_cmd->add_option("--spec", spec_path, "sweep spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*synth) {
      const NetworkModel model = synthesize_gb36(seed);
      write_file(synth_out, serialize_network(model));
      std::printf("wrote %s (%d zones, %d lines, %.1f MW demand)\n", synth_out.c_str(),
                  static_cast<int>(model.zones.size()), static_cast<int>(model.lines.size()),
                  model.total_demand_mw());
      return kExitOk;
    }

    NetworkModel model = load_network_file(network_path);
    if (bess != "model") model = with_fleet(model, fleet_preset(bess));

    if (*run_cmd) {
      ScenarioFile file;
      if (!scenario_path.empty()) {
        file = load_scenario_file(scenario_path);
      } else if (magnitude != 0.0) {
        file.scenario = dynamic ? dynamic_laa(zone, magnitude, times)
                                : static_laa(zone, magnitude, at);
      }
      if (!label.empty()) file.scenario.label = label;

      const RunRecord record =
          write_run_artifacts(model, file.scenario, config, file.protection, out_dir);
      print_metrics_row(record.run_id, record.metrics);
      std::printf("artifacts in %s\n", record.out_dir.c_str());
      if (fail_on_breach > 0.0 && record.metrics.nadir_hz < fail_on_breach) {
        std::fprintf(stderr, "breach: nadir %.4f Hz below limit %.4f Hz\n",
                     record.metrics.nadir_hz, fail_on_breach);
        return kExitBreach;
      }
      return kExitOk;
    }

    if (*thr_cmd) {
      const ThresholdResult result =
          find_min_laa(model, zone, limit, {bracket[0], bracket[1]}, tol, config);
      std::printf("threshold zone=%s limit=%.2f Hz  min_laa=%.3f MW  iterations=%d\n",
                  zone.c_str(), result.limit_hz, result.min_laa_mw, result.iterations);
      if (result.hi_metrics) print_metrics_row("breach-endpoint", *result.hi_metrics);
      const std::string id = run_id(model, static_laa(zone, std::max(result.min_laa_mw, 1e-9)),
                                    config, ProtectionPolicy{});
      const std::string dir = out_dir + "/threshold-" + id;
      std::filesystem::create_directories(dir);
      write_file(dir + "/threshold.json", threshold_to_json(result));
      std::printf("artifacts in %s\n", dir.c_str());
      return kExitOk;
    }

    if (*sweep_cmd) {
      const SweepSpec spec = load_sweep_spec_file(spec_path);
      const SweepResult result = sweep_tables(model, spec, config);
      const std::string table = render_table(result);
      std::fputs(table.c_str(), stdout);
      const std::string dir = out_dir + "/sweep-" + result.run_id;
      std::filesystem::create_directories(dir);
      write_file(dir + "/sweep.json", sweep_to_json(result));
      write_file(dir + "/table.txt", table);
      std::printf("artifacts in %s\n", dir.c_str());
      bool any_error = false;
      for (const SweepRow& row : result.rows) any_error = any_error || !row.error.empty();
      return any_error ? kExitValidation : kExitOk;
    }
  } catch (const BracketError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
