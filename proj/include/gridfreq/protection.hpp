#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "gridfreq/network.hpp"
#include "gridfreq/trace.hpp"

namespace gridfreq {

struct SystemState;  // simulation.hpp

/// Operating bands and relay settings. Defaults follow GB practice: normal
/// operation within +-0.2 Hz, statutory limits +-0.5 Hz, automatic load
/// shedding at 48.8 Hz, and a RoCoF limit of 0.0025 p.u./s sustained over
/// 500 ms.
struct ProtectionPolicy {
  double normal_band_hz = 0.2;
  double statutory_band_hz = 0.5;
  double ufls_threshold_hz = 48.8;
  double shed_fraction = 0.05;
  double ufls_confirm_s = 0.1;
  double rocof_limit_pu_s = 0.0025;
  double rocof_window_s = 0.5;
};

void validate(const ProtectionPolicy& policy, double nominal_freq_hz = 50.0);

struct RelayState {
  std::optional<double> below_since_s;
  bool tripped = false;  // latched for the rest of the run
};

/// Single-stage under-frequency relay. The trip fires once, when the COI
/// frequency has stayed at or below the threshold for ufls_confirm_s, and
/// latches. Returns the advanced state and whether the trip fired on this
/// call.
std::pair<RelayState, bool> ufls_update(const ProtectionPolicy& policy, RelayState relay,
                                        double coi_freq_hz, double now_s);

/// Per-zone shed amounts for one UFLS stage: the policy fraction of each
/// zone's base demand, capped by the zone's sheddable fraction. Attack load
/// is held by the adversary and is never shed.
Vector shed_amounts_mw(const NetworkModel& model, const ProtectionPolicy& policy);

/// Applies one shedding stage to a running state (idempotent once latched).
SystemState apply_shedding(const NetworkModel& model, SystemState state,
                           const ProtectionPolicy& policy);

/// Worst operating band a trace left. Ufls means the COI frequency reached
/// the load-shedding threshold.
enum class Band { None, Normal, Statutory, Ufls };

std::string to_string(Band band);

struct ViolationReport {
  Band worst = Band::None;
  /// First time each band edge was crossed (keyed by the edge frequency in
  /// Hz); only edges actually crossed are present.
  std::map<double, double> first_crossing_s;
  bool rocof_violation = false;
};

/// Scans a trace's COI frequency against the policy bands and the sustained
/// RoCoF limit. Throws ValidationError on an empty trace.
ViolationReport classify_excursion(const Trace& trace, const ProtectionPolicy& policy);

}  // namespace gridfreq
