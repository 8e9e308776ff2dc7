#pragma once

#include <string>
#include <vector>

#include "gridfreq/types.hpp"

namespace gridfreq {

struct TraceEvent {
  double time_s = 0.0;
  std::string kind;  // "attack_step" | "ufls_trip"
  std::string zone;  // attack steps only
  double value_mw = 0.0;
};

/// Sampled run output. Row k of each matrix belongs to time[k]; frequency and
/// load columns follow zone_ids, delivered-power columns follow bess_ids.
struct Trace {
  Vector time_s;
  Matrix freq_hz;    // samples x zones
  Vector coi_hz;
  Matrix load_mw;    // samples x zones
  Matrix bess_mw;    // samples x fleet units
  Vector shed_mw;
  std::vector<TraceEvent> events;
  std::vector<std::string> zone_ids;
  std::vector<std::string> bess_ids;

  Index n_samples() const { return time_s.size(); }
  double span_s() const { return n_samples() > 0 ? time_s[n_samples() - 1] - time_s[0] : 0.0; }
};

}  // namespace gridfreq
