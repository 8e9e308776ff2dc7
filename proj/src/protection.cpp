#include "gridfreq/protection.hpp"

#include <algorithm>
#include <cmath>

#include "gridfreq/errors.hpp"
#include "gridfreq/simulation.hpp"

namespace gridfreq {

void validate(const ProtectionPolicy& policy, double nominal_freq_hz) {
  if (!(policy.normal_band_hz > 0.0)) throw ValidationError("protection: normal_band_hz must be > 0");
  if (!(policy.statutory_band_hz >= policy.normal_band_hz))
    throw ValidationError("protection: statutory_band_hz must be >= normal_band_hz");
  if (!(policy.ufls_threshold_hz < nominal_freq_hz - policy.statutory_band_hz))
    throw ValidationError("protection: ufls_threshold_hz must lie below the statutory band");
  if (!(policy.shed_fraction > 0.0 && policy.shed_fraction < 1.0))
    throw ValidationError("protection: shed_fraction must be in (0, 1)");
  if (!(policy.ufls_confirm_s >= 0.0)) throw ValidationError("protection: ufls_confirm_s must be >= 0");
  if (!(policy.rocof_limit_pu_s > 0.0)) throw ValidationError("protection: rocof_limit_pu_s must be > 0");
  if (!(policy.rocof_window_s > 0.0)) throw ValidationError("protection: rocof_window_s must be > 0");
}

std::pair<RelayState, bool> ufls_update(const ProtectionPolicy& policy, RelayState relay,
                                        double coi_freq_hz, double now_s) {
  if (relay.tripped) return {relay, false};
  if (coi_freq_hz <= policy.ufls_threshold_hz) {
    if (!relay.below_since_s) relay.below_since_s = now_s;
    if (now_s - *relay.below_since_s >= policy.ufls_confirm_s - 1e-12) {
      relay.tripped = true;
      return {relay, true};
    }
  } else {
    relay.below_since_s.reset();
  }
  return {relay, false};
}

Vector shed_amounts_mw(const NetworkModel& model, const ProtectionPolicy& policy) {
  Vector shed(model.n_zones());
  for (Index i = 0; i < model.n_zones(); ++i) {
    const Zone& z = model.zones[i];
    shed[i] = std::min(policy.shed_fraction, z.sheddable_fraction) * z.demand_mw;
  }
  return shed;
}

SystemState apply_shedding(const NetworkModel& model, SystemState state,
                           const ProtectionPolicy& policy) {
  if (state.ufls_latched) return state;  // one stage only
  const Vector shed = shed_amounts_mw(model, policy);
  state.load_mw = (state.load_mw - shed).cwiseMax(0.0);
  state.shed_mw += shed.sum();
  state.ufls_latched = true;
  state.relay.tripped = true;
  return state;
}

std::string to_string(Band band) {
  switch (band) {
    case Band::None: return "none";
    case Band::Normal: return "normal";
    case Band::Statutory: return "statutory";
    case Band::Ufls: return "ufls";
  }
  return "none";
}

ViolationReport classify_excursion(const Trace& trace, const ProtectionPolicy& policy) {
  if (trace.n_samples() == 0) throw ValidationError("classify_excursion: empty trace");
  const double f0 = 50.0;

  ViolationReport report;
  struct Edge {
    double value;
    bool lower;
    Band band;
  };
  const Edge edges[] = {
      {f0 - policy.normal_band_hz, true, Band::Normal},
      {f0 + policy.normal_band_hz, false, Band::Normal},
      {f0 - policy.statutory_band_hz, true, Band::Statutory},
      {f0 + policy.statutory_band_hz, false, Band::Statutory},
      {policy.ufls_threshold_hz, true, Band::Ufls},
  };
  for (const Edge& edge : edges) {
    for (Index k = 0; k < trace.n_samples(); ++k) {
      const double f = trace.coi_hz[k];
      // The shedding band is entered at its threshold; the operating bands
      // are left strictly beyond their edges.
      const bool crossed = edge.band == Band::Ufls ? f <= edge.value
                           : edge.lower            ? f < edge.value
                                                   : f > edge.value;
      if (crossed) {
        report.first_crossing_s.emplace(edge.value, trace.time_s[k]);
        if (static_cast<int>(edge.band) > static_cast<int>(report.worst)) report.worst = edge.band;
        break;
      }
    }
  }

  // Sustained RoCoF: the windowed slope magnitude must stay above the limit
  // for longer than the window itself.
  const double dt = trace.n_samples() > 1 ? trace.time_s[1] - trace.time_s[0] : 0.0;
  if (dt > 0.0 && trace.span_s() >= policy.rocof_window_s) {
    const Index k = std::max<Index>(1, static_cast<Index>(std::llround(policy.rocof_window_s / dt)));
    double run_start = -1.0;
    double last_in_run = 0.0;
    for (Index i = 0; i + k < trace.n_samples(); ++i) {
      const double slope =
          (trace.coi_hz[i + k] - trace.coi_hz[i]) / (trace.time_s[i + k] - trace.time_s[i]) / f0;
      if (std::abs(slope) > policy.rocof_limit_pu_s) {
        if (run_start < 0.0) run_start = trace.time_s[i];
        last_in_run = trace.time_s[i];
        if (last_in_run - run_start > policy.rocof_window_s) {
          report.rocof_violation = true;
          break;
        }
      } else {
        run_start = -1.0;
      }
    }
  }
  return report;
}

}  // namespace gridfreq
