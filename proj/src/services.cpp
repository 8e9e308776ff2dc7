#include "gridfreq/services.hpp"

#include <algorithm>
#include <cmath>

#include "gridfreq/errors.hpp"

namespace gridfreq {

std::string to_string(ServiceMode mode) {
  switch (mode) {
    case ServiceMode::DynamicContainment: return "DC";
    case ServiceMode::DynamicModeration: return "DM";
    case ServiceMode::DynamicRegulation: return "DR";
  }
  return "DC";
}

ServiceMode parse_service_mode(const std::string& s) {
  if (s == "DC") return ServiceMode::DynamicContainment;
  if (s == "DM") return ServiceMode::DynamicModeration;
  if (s == "DR") return ServiceMode::DynamicRegulation;
  throw ValidationError("bess mode must be one of \"DC\", \"DM\", \"DR\" (got \"" + s + "\")");
}

ServiceCurve default_curve(ServiceMode mode) {
  ServiceCurve curve;
  curve.deadband_hz = 0.015;
  curve.full_deviation_hz = mode == ServiceMode::DynamicContainment ? 0.5 : 0.2;
  curve.symmetric = true;
  return curve;
}

namespace {

double move_toward(double value, double target, double budget) {
  return value + std::clamp(target - value, -budget, budget);
}

}  // namespace

BessState update_delivery(const BessUnit& unit, BessState state, double target_mw,
                          double now_s, double dt_s) {
  const double rate = unit.ramp_rate_mw_per_s();
  double next = state.delivered_mw;

  if (target_mw == 0.0) {
    state.armed_since_s.reset();
    next = move_toward(next, 0.0, rate * dt_s);
  } else {
    if (!state.armed_since_s) state.armed_since_s = now_s;
    // Output is held at zero through the activation delay; the first move
    // after the delay elapses gets only the part of the step past it, so a
    // full-power demand reaches the rating at exactly armed + full_delivery_s.
    const double gap = now_s - (*state.armed_since_s + unit.activation_delay_s);
    if (gap > 0.0) next = move_toward(next, target_mw, rate * std::min(gap, dt_s));
  }

  next = std::clamp(next, -unit.rating_mw, unit.rating_mw);

  if (unit.energy_capacity_mwh) {
    const double capacity = *unit.energy_capacity_mwh;
    const double remaining = capacity - state.energy_used_mwh;
    const double step_energy = std::abs(next) * dt_s / 3600.0;
    if (remaining <= 1e-12 * std::max(1.0, capacity)) {
      next = 0.0;
    } else if (step_energy - remaining > 1e-12 * std::max(1.0, step_energy)) {
      next *= remaining / step_energy;  // spend exactly what is left
    }
  }

  state.energy_used_mwh += std::abs(next) * dt_s / 3600.0;
  state.delivered_mw = next;
  return state;
}

Vector fleet_injection(const std::vector<BessUnit>& fleet, std::vector<BessState>& states,
                       const Vector& zone_freq_dev_hz, const std::vector<Index>& unit_zone,
                       double now_s, double dt_s) {
  Vector injection = Vector::Zero(zone_freq_dev_hz.size());
  for (std::size_t u = 0; u < fleet.size(); ++u) {
    const Index z = unit_zone[u];
    const double target = droop_target(fleet[u].curve, fleet[u].rating_mw, zone_freq_dev_hz[z]);
    states[u] = update_delivery(fleet[u], states[u], target, now_s, dt_s);
    injection[z] += states[u].delivered_mw;
  }
  return injection;
}

namespace {

std::vector<BessUnit> placed_fleet(double dr_total_mw, double dc_total_mw) {
  static const char* kDrZones[] = {"Z1", "Z8", "Z20", "Z25A", "Z27W"};
  static const char* kDcZones[] = {"Z3", "Z8", "Z9", "Z15", "Z25B"};
  std::vector<BessUnit> fleet;
  for (const char* zone : kDrZones) {
    if (dr_total_mw <= 0.0) break;
    BessUnit u;
    u.zone = zone;
    u.id = "dr_" + u.zone;
    u.rating_mw = dr_total_mw / 5.0;
    u.mode = ServiceMode::DynamicRegulation;
    u.curve = default_curve(u.mode);
    fleet.push_back(std::move(u));
  }
  for (const char* zone : kDcZones) {
    if (dc_total_mw <= 0.0) break;
    BessUnit u;
    u.zone = zone;
    u.id = "dc_" + u.zone;
    u.rating_mw = dc_total_mw / 5.0;
    u.mode = ServiceMode::DynamicContainment;
    u.curve = default_curve(u.mode);
    fleet.push_back(std::move(u));
  }
  return fleet;
}

}  // namespace

std::vector<BessUnit> fleet_preset(const std::string& name) {
  if (name == "none") return {};
  if (name == "paper-400") return placed_fleet(200.0, 200.0);
  if (name == "paper-500") return placed_fleet(250.0, 250.0);
  if (name == "paper-600") return placed_fleet(300.0, 300.0);
  if (name == "paper-500-dr") return placed_fleet(500.0, 0.0);
  if (name == "paper-500-dc") return placed_fleet(0.0, 500.0);
  if (name == "paper-500-z8") {
    // Equal mix concentrated in the usual attack zone.
    std::vector<BessUnit> fleet;
    for (ServiceMode mode : {ServiceMode::DynamicRegulation, ServiceMode::DynamicContainment}) {
      BessUnit u;
      u.zone = "Z8";
      u.id = (mode == ServiceMode::DynamicRegulation ? "dr_" : "dc_") + u.zone;
      u.rating_mw = 250.0;
      u.mode = mode;
      u.curve = default_curve(mode);
      fleet.push_back(std::move(u));
    }
    return fleet;
  }
  throw ValidationError("unknown bess preset \"" + name +
                        "\" (expected none, paper-400, paper-500, paper-600, "
                        "paper-500-dc, paper-500-dr, paper-500-z8)");
}

}  // namespace gridfreq
