#include "gridfreq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace gridfreq {

namespace {

constexpr double kTotalDemandMw = 40000.0;
constexpr double kZ8DemandMw = 3669.5;
constexpr double kNetImportMw = 2000.0;
constexpr int kZones = 36;
constexpr int kLines = 69;
constexpr int kGenerators = 76;
constexpr int kInterconnectors = 8;
constexpr double kCapacityMargin = 1.10;   // total rating over dispatched load
constexpr double kHeadroomFraction = 0.10; // spinning reserve per generator
// 1.0 p.u. leaves the primary response underdamped enough to overshoot the
// nominal frequency on recovery; 2.0 keeps post-event traces below 50 Hz.
constexpr double kDamping = 2.0;

double round1(double x) { return std::round(x * 10.0) / 10.0; }
double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::vector<std::string> zone_labels() {
  std::vector<std::string> labels;
  for (int i = 1; i <= 24; ++i) labels.push_back("Z" + std::to_string(i));
  labels.insert(labels.end(), {"Z25A", "Z25B", "Z26", "Z27W", "Z27E"});
  for (int i = 28; i <= 34; ++i) labels.push_back("Z" + std::to_string(i));
  return labels;
}

}  // namespace

NetworkModel synthesize_gb36(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NetworkModel model;
  model.base_mva = 100.0;
  model.nominal_freq_hz = 50.0;

  const std::vector<std::string> labels = zone_labels();
  const int z8 = 7;  // "Z8"

  // Demands: Z8 pinned, the rest drawn and scaled to hit the system total.
  std::vector<double> weight(kZones, 0.0);
  double weight_sum = 0.0;
  for (int i = 0; i < kZones; ++i) {
    if (i == z8) continue;
    weight[i] = uniform(rng, 0.5, 1.6);
    weight_sum += weight[i];
  }
  model.zones.resize(kZones);
  for (int i = 0; i < kZones; ++i) {
    model.zones[i].id = labels[i];
    model.zones[i].demand_mw =
        i == z8 ? kZ8DemandMw : round1(weight[i] / weight_sum * (kTotalDemandMw - kZ8DemandMw));
    model.zones[i].sheddable_fraction = 0.05;
  }

  // Zone generation capacity: proportional to demand with a drawn spread so
  // zones differ in local inertia, scaled to the target system margin.
  std::vector<double> capacity(kZones, 0.0);
  double capacity_sum = 0.0;
  for (int i = 0; i < kZones; ++i) {
    capacity[i] = model.zones[i].demand_mw * uniform(rng, 0.7, 1.8);
    capacity_sum += capacity[i];
  }
  const double capacity_target = kCapacityMargin * (kTotalDemandMw - kNetImportMw);
  for (double& c : capacity) c *= capacity_target / capacity_sum;

  // One generator per zone, the remaining 40 allocated by largest remainder
  // of the capacity quota.
  std::vector<int> units(kZones, 1);
  {
    const int extra_total = kGenerators - kZones;
    std::vector<double> fraction(kZones);
    int assigned = 0;
    for (int i = 0; i < kZones; ++i) {
      const double quota = capacity[i] / capacity_target * extra_total;
      const int whole = static_cast<int>(quota);
      units[i] += whole;
      assigned += whole;
      fraction[i] = quota - whole;
    }
    std::vector<int> order(kZones);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fraction[a] > fraction[b]; });
    for (int k = 0; k < extra_total - assigned; ++k) units[order[k]] += 1;
  }
  for (int i = 0; i < kZones; ++i) {
    const double rating = round1(capacity[i] / units[i]);
    for (int u = 0; u < units[i]; ++u) {
      SyncGenerator gen;
      gen.zone = labels[i];
      gen.rating_mva = rating;
      gen.inertia_h_s = 5.0;
      gen.droop_pu = 0.05;
      gen.governor_tc_s = 8.0;
      gen.headroom_mw = round1(kHeadroomFraction * rating);
      gen.damping_pu = kDamping;
      model.generators.push_back(std::move(gen));
    }
  }

  // Interconnectors: even split of the net import over eight coastal zones.
  for (const char* zone : {"Z1", "Z5", "Z9", "Z14", "Z19", "Z25B", "Z29", "Z34"}) {
    model.interconnectors.push_back({zone, kNetImportMw / kInterconnectors});
  }
  static_assert(kInterconnectors == 8);

  // Topology: a ring over all zones plus 33 chords for a 69-line mesh.
  std::set<std::pair<int, int>> used;
  auto add_line = [&](int a, int b) {
    used.insert({std::min(a, b), std::max(a, b)});
    Line line;
    line.from = labels[a];
    line.to = labels[b];
    line.susceptance_pu = round2(uniform(rng, 5.0, 50.0));
    line.rating_mw = std::round(40.0 * line.susceptance_pu);
    model.lines.push_back(std::move(line));
  };
  for (int i = 0; i < kZones; ++i) add_line(i, (i + 1) % kZones);
  while (static_cast<int>(model.lines.size()) < kLines) {
    const int a = uniform_int(rng, 0, kZones - 1);
    const int b = uniform_int(rng, 0, kZones - 1);
    if (a == b || used.count({std::min(a, b), std::max(a, b)})) continue;
    add_line(a, b);
  }

  return model;
}

}  // namespace gridfreq
