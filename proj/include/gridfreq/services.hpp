#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridfreq/types.hpp"

namespace gridfreq {

enum class ServiceMode { DynamicContainment, DynamicModeration, DynamicRegulation };

std::string to_string(ServiceMode mode);               // "DC" / "DM" / "DR"
ServiceMode parse_service_mode(const std::string& s);  // throws ValidationError

/// Piecewise-linear power-frequency characteristic: zero inside the deadband,
/// full rating beyond full_deviation, linear in between. When symmetric is
/// false the curve responds to under-frequency only.
struct ServiceCurve {
  double deadband_hz = 0.015;
  double full_deviation_hz = 0.5;
  bool symmetric = true;
};

/// Default curve per service: containment reaches full power at +-0.5 Hz,
/// moderation and regulation at +-0.2 Hz, all with a +-0.015 Hz deadband.
ServiceCurve default_curve(ServiceMode mode);

struct BessUnit {
  std::string id;
  std::string zone;
  double rating_mw = 0.0;
  ServiceMode mode = ServiceMode::DynamicContainment;
  ServiceCurve curve = {};
  double activation_delay_s = 0.5;
  double full_delivery_s = 1.0;
  std::optional<double> energy_capacity_mwh;  // nullopt = unbounded

  /// Ramp limit such that a full-power demand arming at t reaches the rating
  /// at exactly t + full_delivery_s.
  double ramp_rate_mw_per_s() const {
    return rating_mw / (full_delivery_s - activation_delay_s);
  }
};

struct BessState {
  double delivered_mw = 0.0;                // signed; positive = injection
  std::optional<double> armed_since_s;      // first time the deviation left the deadband
  double energy_used_mwh = 0.0;
};

/// Commanded power for a frequency deviation. Odd in freq_dev (sign opposes
/// the deviation), continuous, piecewise linear with knots at the deadband
/// and full-deviation edges.
template <typename Scalar>
Scalar droop_target(const ServiceCurve& curve, Scalar rating_mw, Scalar freq_dev_hz) {
  const Scalar db = static_cast<Scalar>(curve.deadband_hz);
  const Scalar full = static_cast<Scalar>(curve.full_deviation_hz);
  const Scalar mag = freq_dev_hz < Scalar(0) ? -freq_dev_hz : freq_dev_hz;
  if (mag <= db) return Scalar(0);
  if (!curve.symmetric && freq_dev_hz > Scalar(0)) return Scalar(0);
  Scalar frac = (mag - db) / (full - db);
  if (frac > Scalar(1)) frac = Scalar(1);
  return (freq_dev_hz < Scalar(0) ? rating_mw : -rating_mw) * frac;
}

/// Advance one unit across one step boundary.
///
/// A zero target means the deviation is inside the deadband: the unit disarms
/// and its output ramps back to zero. A nonzero target arms the unit; output
/// stays at zero until activation_delay_s has elapsed since arming, then moves
/// toward the target under the ramp limit. Bounded units stop delivering once
/// their throughput budget energy_capacity_mwh is spent (that cutoff is the
/// one transition exempt from the ramp limit).
BessState update_delivery(const BessUnit& unit, BessState state, double target_mw,
                          double now_s, double dt_s);

/// Advance a whole fleet and return the summed injection per zone. Each unit
/// responds to its own zone's deviation; unit_zone maps fleet index to zone
/// index. states is updated in place.
Vector fleet_injection(const std::vector<BessUnit>& fleet, std::vector<BessState>& states,
                       const Vector& zone_freq_dev_hz, const std::vector<Index>& unit_zone,
                       double now_s, double dt_s);

/// Named fleet layouts used by the replication studies. "none" is empty;
/// "paper-400" / "paper-500" / "paper-600" split the total equally over five
/// regulation units (Z1, Z8, Z20, Z25A, Z27W) and five containment units
/// (Z3, Z8, Z9, Z15, Z25B); "paper-500-dc" / "paper-500-dr" put 500 MW on one
/// side only. Throws ValidationError for unknown names.
std::vector<BessUnit> fleet_preset(const std::string& name);

}  // namespace gridfreq
