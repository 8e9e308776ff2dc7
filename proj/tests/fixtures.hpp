#pragma once

// Shared test fixtures: small hand-built models with known closed forms plus
// the shipped synthetic GB-36 analogue.

#include <random>
#include <string>
#include <vector>

#include "gridfreq/io.hpp"
#include "gridfreq/network.hpp"
#include "gridfreq/trace.hpp"
#include "gridfreq/types.hpp"

namespace gridfreq::testing {

/// Crafted single-zone trace with the given COI series at fixed spacing.
inline Trace make_trace(const std::vector<double>& coi, double dt = 0.01) {
  Trace t;
  const Index n = static_cast<Index>(coi.size());
  t.time_s.resize(n);
  t.coi_hz.resize(n);
  t.freq_hz.resize(n, 1);
  t.load_mw = Matrix::Zero(n, 1);
  t.bess_mw.resize(n, 0);
  t.shed_mw = Vector::Zero(n);
  t.zone_ids = {"Z1"};
  for (Index k = 0; k < n; ++k) {
    t.time_s[k] = k * dt;
    t.coi_hz[k] = coi[k];
    t.freq_hz(k, 0) = coi[k];
  }
  return t;
}

inline std::string data_path(const std::string& name) {
  return std::string(GRIDFREQ_DATA_DIR) + "/" + name;
}

inline NetworkModel load_gb36() { return load_network_file(data_path("gb36-synthetic.json")); }

/// One zone, one generator: no network flow at all.
inline NetworkModel single_zone_model(double demand_mw = 100.0, double rating_mva = 1000.0) {
  NetworkModel m;
  m.zones.push_back({"Z1", demand_mw, 0.05});
  SyncGenerator g;
  g.zone = "Z1";
  g.rating_mva = rating_mva;
  g.headroom_mw = 0.1 * rating_mva;
  m.generators.push_back(g);
  return m;
}

/// Two symmetric zones, one line; total H*S = 10,000 MVA*s.
inline NetworkModel two_zone_model() {
  NetworkModel m;
  m.zones.push_back({"Z1", 500.0, 0.05});
  m.zones.push_back({"Z2", 500.0, 0.05});
  m.lines.push_back({"Z1", "Z2", 10.0, 1000.0});
  for (const char* zone : {"Z1", "Z2"}) {
    SyncGenerator g;
    g.zone = zone;
    g.rating_mva = 1000.0;
    g.headroom_mw = 100.0;
    m.generators.push_back(g);
  }
  return m;
}

/// Three zones in a triangle, all susceptances 5 p.u.
inline NetworkModel triangle_model() {
  NetworkModel m;
  for (const char* zone : {"Z1", "Z2", "Z3"}) {
    m.zones.push_back({zone, 300.0, 0.05});
    SyncGenerator g;
    g.zone = zone;
    g.rating_mva = 500.0;
    g.headroom_mw = 50.0;
    m.generators.push_back(g);
  }
  m.lines.push_back({"Z1", "Z2", 5.0, 500.0});
  m.lines.push_back({"Z2", "Z3", 5.0, 500.0});
  m.lines.push_back({"Z1", "Z3", 5.0, 500.0});
  return m;
}

/// Random connected model: spanning tree plus extra edges, one generator per
/// zone. Used by round-trip and equilibrium property tests.
inline NetworkModel random_model(std::mt19937_64& rng, int n_zones) {
  NetworkModel m;
  for (int i = 0; i < n_zones; ++i)
    m.zones.push_back({"Z" + std::to_string(i + 1), uniform(rng, 100.0, 1500.0), 0.05});
  for (int i = 1; i < n_zones; ++i) {
    const int parent = uniform_int(rng, 0, i - 1);
    m.lines.push_back({m.zones[parent].id, m.zones[i].id, uniform(rng, 5.0, 50.0), 0.0});
  }
  const int extra = uniform_int(rng, 0, n_zones);
  for (int e = 0; e < extra; ++e) {
    const int a = uniform_int(rng, 0, n_zones - 1);
    const int b = uniform_int(rng, 0, n_zones - 1);
    if (a == b) continue;
    m.lines.push_back({m.zones[a].id, m.zones[b].id, uniform(rng, 5.0, 50.0), 0.0});
  }
  for (int i = 0; i < n_zones; ++i) {
    SyncGenerator g;
    g.zone = m.zones[i].id;
    g.rating_mva = m.zones[i].demand_mw * uniform(rng, 1.1, 1.8);
    g.droop_pu = uniform(rng, 0.04, 0.06);
    g.governor_tc_s = uniform(rng, 5.0, 10.0);
    g.headroom_mw = 0.1 * g.rating_mva;
    m.generators.push_back(g);
  }
  return m;
}

}  // namespace gridfreq::testing
