#pragma once

#include <vector>

#include "gridfreq/network.hpp"
#include "gridfreq/protection.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/trace.hpp"

namespace gridfreq {

struct SimulationConfig {
  double dt_s = 0.01;        // fixed integration step
  double horizon_s = 180.0;
  int sample_every = 1;      // steps between trace samples
};

void validate(const SimulationConfig& config);

/// Full dynamic state of one run. angle/freq_dev/gov_power are the
/// continuous fields; load, BESS delivery, and the relay advance discretely
/// at step boundaries.
struct SystemState {
  double time_s = 0.0;
  Vector angle_rad;      // per zone
  Vector freq_dev_hz;    // per zone
  Vector gov_power_mw;   // per generator
  Vector load_mw;        // per zone, current (attack steps and shedding applied)
  std::vector<BessState> bess;
  RelayState relay;
  double shed_mw = 0.0;
  bool ufls_latched = false;
};

struct StateDerivative {
  Vector dangle_rad_s;
  Vector dfreq_hz_s;
  Vector dgov_mw_s;
};

// Zone-aggregated swing dynamics with per-generator first-order governors:
//
//   dangle_i/dt = 2 pi dfreq_i
//   (2 H_i S_i / f0) dfreq_i/dt = P_gov,i + P_bess,i + P_ic,i - P_load,i
//                                 - base * (L angle)_i - D_i S_i dfreq_i / f0
//   tc_g dP_gov,g/dt = setpoint_g - (dfreq_zone / f0) S_g / droop_g - P_gov,g
//
// where L is the susceptance Laplacian, H_i S_i and D_i S_i aggregate the
// zone's generators, and governor output is clamped to
// [0, setpoint + headroom] after each step. Integration is classical RK4 at a
// fixed step; load steps, UFLS trips, and BESS delivery updates land on step
// boundaries only.
class Simulator {
 public:
  /// Prepares a model for integration. Rejects models hosting a zone with no
  /// synchronous generator (zero aggregate inertia makes that zone's swing
  /// equation degenerate).
  explicit Simulator(const NetworkModel& model, ProtectionPolicy policy = {});

  const NetworkModel& model() const { return model_; }
  const ProtectionPolicy& policy() const { return policy_; }

  /// Equilibrium state: nominal frequency everywhere, dispatch from
  /// solve_equilibrium, relays reset.
  SystemState initial_state() const;

  /// Inertia-weighted mean frequency in Hz.
  double coi_frequency(const SystemState& state) const;

  StateDerivative derivatives(const SystemState& state) const;

  /// One RK4 step of the continuous fields plus the governor clamp. Discrete
  /// logic (events, relay, BESS) is owned by run().
  SystemState step(const SystemState& state, const SimulationConfig& config) const;

  /// Integrates the scenario over the configured horizon. Deterministic:
  /// identical inputs produce identical traces. Throws NumericalError with
  /// the diagnostic time if the state becomes non-finite.
  Trace run(const AttackScenario& scenario, const SimulationConfig& config) const;

 private:
  struct Work;

  void eval(const Vector& x, const Vector& load_mw, const Vector& bess_zone_mw,
            Work& work, Vector& dx) const;
  void rk4(Vector& x, const Vector& load_mw, const Vector& bess_zone_mw, double dt_s,
           Work& work) const;
  Vector pack(const SystemState& state) const;
  void unpack(const Vector& x, SystemState& state) const;

  NetworkModel model_;
  ProtectionPolicy policy_;
  Index n_ = 0;  // zones
  Index g_ = 0;  // generators
  double f0_ = 50.0;
  double base_mva_ = 100.0;
  Matrix laplacian_;
  Vector inv_twoHS_f0_;     // f0 / (2 H_i S_i) per zone
  Vector coi_weight_;       // H_i S_i per zone
  Vector damping_mw_hz_;    // D_i S_i / f0 per zone
  Vector interconnect_mw_;  // fixed injections per zone
  Vector base_demand_mw_;
  std::vector<Index> gen_zone_;
  Vector gen_gain_mw_hz_;   // S_g / (droop_g f0)
  Vector gen_tc_s_;
  Vector gen_setpoint_mw_;
  Vector gen_pmax_mw_;
  Vector equilibrium_angle_rad_;
  std::vector<Index> bess_zone_;
};

// Contract-level wrappers; each constructs a Simulator for the call.
StateDerivative derivatives(const SystemState& state, const NetworkModel& model);
SystemState step(const SystemState& state, const NetworkModel& model,
                 const SimulationConfig& config);
Trace run(const NetworkModel& model, const AttackScenario& scenario,
          const SimulationConfig& config, const ProtectionPolicy& policy = {});
double coi_frequency(const SystemState& state, const NetworkModel& model);

}  // namespace gridfreq
