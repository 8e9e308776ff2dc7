#include "gridfreq/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridfreq/errors.hpp"

namespace gridfreq {

void validate(const SimulationConfig& config) {
  if (!(config.dt_s > 0.0)) throw ValidationError("config: dt must be > 0");
  if (!(config.horizon_s >= config.dt_s)) throw ValidationError("config: horizon must be >= dt");
  if (config.sample_every < 1) throw ValidationError("config: sample_every must be >= 1");
}

struct Simulator::Work {
  Vector k1, k2, k3, k4, xt, flow, gov_zone;
  explicit Work(Index dim, Index zones)
      : k1(dim), k2(dim), k3(dim), k4(dim), xt(dim), flow(zones), gov_zone(zones) {}
};

Simulator::Simulator(const NetworkModel& model, ProtectionPolicy policy)
    : model_(model), policy_(policy) {
  gridfreq::validate(model_);
  gridfreq::validate(policy_, model_.nominal_freq_hz);

  n_ = model_.n_zones();
  g_ = static_cast<Index>(model_.generators.size());
  f0_ = model_.nominal_freq_hz;
  base_mva_ = model_.base_mva;
  laplacian_ = build_coupling_matrix(model_);

  Vector twoHS = Vector::Zero(n_);
  coi_weight_ = Vector::Zero(n_);
  damping_mw_hz_ = Vector::Zero(n_);
  gen_zone_.resize(g_);
  gen_gain_mw_hz_ = Vector::Zero(g_);
  gen_tc_s_ = Vector::Zero(g_);
  gen_pmax_mw_ = Vector::Zero(g_);
  for (Index k = 0; k < g_; ++k) {
    const SyncGenerator& gen = model_.generators[k];
    const Index z = *model_.zone_index(gen.zone);
    gen_zone_[k] = z;
    coi_weight_[z] += gen.inertia_h_s * gen.rating_mva;
    twoHS[z] += 2.0 * gen.inertia_h_s * gen.rating_mva;
    damping_mw_hz_[z] += gen.damping_pu * gen.rating_mva / f0_;
    gen_gain_mw_hz_[k] = gen.rating_mva / (gen.droop_pu * f0_);
    gen_tc_s_[k] = gen.governor_tc_s;
  }
  for (Index i = 0; i < n_; ++i) {
    if (twoHS[i] <= 0.0) {
      throw ValidationError("zone \"" + model_.zones[i].id +
                            "\" hosts no synchronous generator; its swing equation is "
                            "degenerate and the model cannot be simulated");
    }
  }
  inv_twoHS_f0_ = f0_ * twoHS.cwiseInverse();

  interconnect_mw_ = Vector::Zero(n_);
  for (const Interconnector& ic : model_.interconnectors)
    interconnect_mw_[*model_.zone_index(ic.zone)] += ic.injection_mw;

  base_demand_mw_ = Vector::Zero(n_);
  for (Index i = 0; i < n_; ++i) base_demand_mw_[i] = model_.zones[i].demand_mw;

  const EquilibriumDispatch eq = solve_equilibrium(model_);
  gen_setpoint_mw_ = eq.setpoint_mw;
  equilibrium_angle_rad_ = eq.angle_rad;
  for (Index k = 0; k < g_; ++k)
    gen_pmax_mw_[k] = eq.setpoint_mw[k] + model_.generators[k].headroom_mw;

  bess_zone_.resize(model_.bess_fleet.size());
  for (std::size_t u = 0; u < model_.bess_fleet.size(); ++u)
    bess_zone_[u] = *model_.zone_index(model_.bess_fleet[u].zone);
}

SystemState Simulator::initial_state() const {
  SystemState state;
  state.time_s = 0.0;
  state.angle_rad = equilibrium_angle_rad_;
  state.freq_dev_hz = Vector::Zero(n_);
  state.gov_power_mw = gen_setpoint_mw_;
  state.load_mw = base_demand_mw_;
  state.bess.assign(model_.bess_fleet.size(), BessState{});
  return state;
}

double Simulator::coi_frequency(const SystemState& state) const {
  return f0_ + coi_weight_.dot(state.freq_dev_hz) / coi_weight_.sum();
}

Vector Simulator::pack(const SystemState& state) const {
  Vector x(2 * n_ + g_);
  x.head(n_) = state.angle_rad;
  x.segment(n_, n_) = state.freq_dev_hz;
  x.tail(g_) = state.gov_power_mw;
  return x;
}

void Simulator::unpack(const Vector& x, SystemState& state) const {
  state.angle_rad = x.head(n_);
  state.freq_dev_hz = x.segment(n_, n_);
  state.gov_power_mw = x.tail(g_);
}

void Simulator::eval(const Vector& x, const Vector& load_mw, const Vector& bess_zone_mw,
                     Work& work, Vector& dx) const {
  const auto angle = x.head(n_);
  const auto freq = x.segment(n_, n_);
  const auto gov = x.tail(g_);

  work.flow.noalias() = laplacian_ * angle;  // per-unit net export
  work.gov_zone.setZero();
  for (Index k = 0; k < g_; ++k) work.gov_zone[gen_zone_[k]] += gov[k];

  dx.head(n_) = kTwoPi * freq;
  dx.segment(n_, n_) =
      inv_twoHS_f0_.cwiseProduct(work.gov_zone + bess_zone_mw + interconnect_mw_ - load_mw -
                                 base_mva_ * work.flow - damping_mw_hz_.cwiseProduct(freq));
  for (Index k = 0; k < g_; ++k) {
    dx[2 * n_ + k] =
        (gen_setpoint_mw_[k] - freq[gen_zone_[k]] * gen_gain_mw_hz_[k] - gov[k]) / gen_tc_s_[k];
  }
}

void Simulator::rk4(Vector& x, const Vector& load_mw, const Vector& bess_zone_mw, double dt_s,
                    Work& work) const {
  eval(x, load_mw, bess_zone_mw, work, work.k1);
  work.xt = x + (0.5 * dt_s) * work.k1;
  eval(work.xt, load_mw, bess_zone_mw, work, work.k2);
  work.xt = x + (0.5 * dt_s) * work.k2;
  eval(work.xt, load_mw, bess_zone_mw, work, work.k3);
  work.xt = x + dt_s * work.k3;
  eval(work.xt, load_mw, bess_zone_mw, work, work.k4);
  x += (dt_s / 6.0) * (work.k1 + 2.0 * (work.k2 + work.k3) + work.k4);
  // Governor clamp is applied to the state after the update (anti-windup).
  x.tail(g_) = x.tail(g_).cwiseMax(0.0).cwiseMin(gen_pmax_mw_);
}

StateDerivative Simulator::derivatives(const SystemState& state) const {
  Work work(2 * n_ + g_, n_);
  Vector bess_zone = Vector::Zero(n_);
  for (std::size_t u = 0; u < state.bess.size(); ++u)
    bess_zone[bess_zone_[u]] += state.bess[u].delivered_mw;
  Vector dx(2 * n_ + g_);
  eval(pack(state), state.load_mw, bess_zone, work, dx);
  StateDerivative d;
  d.dangle_rad_s = dx.head(n_);
  d.dfreq_hz_s = dx.segment(n_, n_);
  d.dgov_mw_s = dx.tail(g_);
  return d;
}

SystemState Simulator::step(const SystemState& state, const SimulationConfig& config) const {
  gridfreq::validate(config);
  Work work(2 * n_ + g_, n_);
  Vector bess_zone = Vector::Zero(n_);
  for (std::size_t u = 0; u < state.bess.size(); ++u)
    bess_zone[bess_zone_[u]] += state.bess[u].delivered_mw;
  Vector x = pack(state);
  rk4(x, state.load_mw, bess_zone, config.dt_s, work);
  if (!x.allFinite()) {
    std::ostringstream os;
    os << "non-finite state after step at t=" << state.time_s + config.dt_s << " s";
    throw NumericalError(os.str());
  }
  SystemState next = state;
  next.time_s = state.time_s + config.dt_s;
  unpack(x, next);
  return next;
}

Trace Simulator::run(const AttackScenario& scenario, const SimulationConfig& config) const {
  gridfreq::validate(config);

  // Scenario preconditions against this model.
  std::vector<Index> step_zone(scenario.steps.size());
  for (std::size_t s = 0; s < scenario.steps.size(); ++s) {
    const AttackStep& st = scenario.steps[s];
    const auto z = model_.zone_index(st.zone);
    if (!z) throw ValidationError("scenario: step references unknown zone \"" + st.zone + "\"");
    if (!(st.time_s >= 0.0) || st.time_s >= config.horizon_s) {
      std::ostringstream os;
      os << "scenario: step time " << st.time_s << " s must lie in [0, horizon)";
      throw ValidationError(os.str());
    }
    if (s > 0 && scenario.steps[s - 1].time_s > st.time_s)
      throw ValidationError("scenario: steps must be sorted by time");
    step_zone[s] = *z;
  }

  const Index n_steps = static_cast<Index>(std::llround(std::ceil(config.horizon_s / config.dt_s - 1e-9)));
  const Index n_samples = n_steps / config.sample_every + 1;
  const Index nb = static_cast<Index>(model_.bess_fleet.size());

  Trace trace;
  trace.time_s.resize(n_samples);
  trace.freq_hz.resize(n_samples, n_);
  trace.coi_hz.resize(n_samples);
  trace.load_mw.resize(n_samples, n_);
  trace.bess_mw.resize(n_samples, nb);
  trace.shed_mw.resize(n_samples);
  trace.zone_ids.reserve(n_);
  for (const Zone& z : model_.zones) trace.zone_ids.push_back(z.id);
  for (const BessUnit& u : model_.bess_fleet) trace.bess_ids.push_back(u.id);

  SystemState state = initial_state();
  Work work(2 * n_ + g_, n_);
  Vector x = pack(state);
  Vector bess_zone = Vector::Zero(n_);
  const Vector shed = shed_amounts_mw(model_, policy_);

  auto record = [&](Index row) {
    trace.time_s[row] = state.time_s;
    trace.freq_hz.row(row) = (state.freq_dev_hz.array() + f0_).matrix().transpose();
    trace.coi_hz[row] = coi_frequency(state);
    trace.load_mw.row(row) = state.load_mw.transpose();
    for (Index u = 0; u < nb; ++u) trace.bess_mw(row, u) = state.bess[u].delivered_mw;
    trace.shed_mw[row] = state.shed_mw;
  };

  record(0);
  Index row = 1;
  std::size_t next_step = 0;

  for (Index k = 0; k < n_steps; ++k) {
    const double t = k * config.dt_s;
    state.time_s = t;

    // Pending load steps land on this boundary.
    while (next_step < scenario.steps.size() &&
           scenario.steps[next_step].time_s <= t + 1e-9) {
      const AttackStep& st = scenario.steps[next_step];
      state.load_mw[step_zone[next_step]] =
          std::max(0.0, state.load_mw[step_zone[next_step]] + st.delta_mw);
      trace.events.push_back({st.time_s, "attack_step", st.zone, st.delta_mw});
      ++next_step;
    }

    // Under-frequency relay keyed on the COI frequency.
    if (!state.relay.tripped) {
      auto [relay, trip] = ufls_update(policy_, state.relay, coi_frequency(state), t);
      state.relay = relay;
      if (trip) {
        state.load_mw = (state.load_mw - shed).cwiseMax(0.0);
        state.shed_mw += shed.sum();
        state.ufls_latched = true;
        trace.events.push_back({t, "ufls_trip", "", shed.sum()});
      }
    }

    // BESS delivery updates once per boundary; held over the step.
    if (nb > 0) {
      bess_zone.setZero();
      for (Index u = 0; u < nb; ++u) {
        const BessUnit& unit = model_.bess_fleet[u];
        const double target =
            droop_target(unit.curve, unit.rating_mw, state.freq_dev_hz[bess_zone_[u]]);
        state.bess[u] = update_delivery(unit, state.bess[u], target, t, config.dt_s);
        bess_zone[bess_zone_[u]] += state.bess[u].delivered_mw;
      }
    }

    rk4(x, state.load_mw, bess_zone, config.dt_s, work);
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "non-finite state at t=" << (k + 1) * config.dt_s << " s (integration blow-up)";
      throw NumericalError(os.str());
    }
    unpack(x, state);
    state.time_s = (k + 1) * config.dt_s;

    if ((k + 1) % config.sample_every == 0) {
      record(row);
      ++row;
    }
  }

  std::stable_sort(trace.events.begin(), trace.events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.time_s < b.time_s; });
  return trace;
}

StateDerivative derivatives(const SystemState& state, const NetworkModel& model) {
  return Simulator(model).derivatives(state);
}

SystemState step(const SystemState& state, const NetworkModel& model,
                 const SimulationConfig& config) {
  return Simulator(model).step(state, config);
}

Trace run(const NetworkModel& model, const AttackScenario& scenario,
          const SimulationConfig& config, const ProtectionPolicy& policy) {
  return Simulator(model, policy).run(scenario, config);
}

double coi_frequency(const SystemState& state, const NetworkModel& model) {
  double weight_sum = 0.0;
  double acc = 0.0;
  for (const SyncGenerator& g : model.generators) {
    const auto z = model.zone_index(g.zone);
    if (!z) throw ValidationError("coi_frequency: generator references unknown zone \"" + g.zone + "\"");
    const double w = g.inertia_h_s * g.rating_mva;
    weight_sum += w;
    acc += w * state.freq_dev_hz[*z];
  }
  if (weight_sum <= 0.0) throw ValidationError("coi_frequency: model has no inertia");
  return model.nominal_freq_hz + acc / weight_sum;
}

}  // namespace gridfreq
