#include "gridfreq/network.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "gridfreq/errors.hpp"

namespace gridfreq {

std::optional<Index> NetworkModel::zone_index(std::string_view id) const {
  for (Index i = 0; i < n_zones(); ++i) {
    if (zones[i].id == id) return i;
  }
  return std::nullopt;
}

double NetworkModel::total_demand_mw() const {
  double total = 0.0;
  for (const Zone& z : zones) total += z.demand_mw;
  return total;
}

double NetworkModel::total_generation_mva() const {
  double total = 0.0;
  for (const SyncGenerator& g : generators) total += g.rating_mva;
  return total;
}

double NetworkModel::net_interconnector_mw() const {
  double total = 0.0;
  for (const Interconnector& ic : interconnectors) total += ic.injection_mw;
  return total;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ValidationError("network: " + what); }

std::string at(const char* array, std::size_t i) {
  std::ostringstream os;
  os << array << "[" << i << "]";
  return os.str();
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const NetworkModel& model) {
  if (!(model.base_mva > 0.0) || !finite(model.base_mva)) fail("base_mva must be > 0");
  if (!(model.nominal_freq_hz > 0.0) || !finite(model.nominal_freq_hz))
    fail("nominal_freq must be > 0");
  if (model.zones.empty()) fail("zones must be non-empty");

  std::unordered_map<std::string, Index> index;
  for (std::size_t i = 0; i < model.zones.size(); ++i) {
    const Zone& z = model.zones[i];
    if (z.id.empty()) fail(at("zones", i) + ".id must be non-empty");
    if (!index.emplace(z.id, static_cast<Index>(i)).second)
      fail(at("zones", i) + ".id duplicates \"" + z.id + "\"");
    if (!(z.demand_mw >= 0.0) || !finite(z.demand_mw))
      fail(at("zones", i) + ".demand must be >= 0");
    if (!(z.sheddable_fraction >= 0.0 && z.sheddable_fraction <= 1.0))
      fail(at("zones", i) + ".sheddable_fraction must be in [0, 1]");
  }

  auto resolve = [&](const std::string& zone, const std::string& field) {
    auto it = index.find(zone);
    if (it == index.end()) fail(field + " references unknown zone \"" + zone + "\"");
    return it->second;
  };

  const Index n = model.n_zones();
  std::vector<std::vector<Index>> adjacency(n);
  for (std::size_t i = 0; i < model.lines.size(); ++i) {
    const Line& line = model.lines[i];
    const Index a = resolve(line.from, at("lines", i) + ".from");
    const Index b = resolve(line.to, at("lines", i) + ".to");
    if (a == b) fail(at("lines", i) + " connects zone \"" + line.from + "\" to itself");
    if (!(line.susceptance_pu > 0.0) || !finite(line.susceptance_pu))
      fail(at("lines", i) + ".susceptance must be > 0");
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  // Connectivity over the line graph.
  std::vector<char> seen(n, 0);
  std::vector<Index> stack = {0};
  seen[0] = 1;
  Index reached = 1;
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != n) {
    for (Index i = 0; i < n; ++i) {
      if (!seen[i]) fail("graph is disconnected: zone \"" + model.zones[i].id +
                         "\" is unreachable from \"" + model.zones[0].id + "\"");
    }
  }

  for (std::size_t i = 0; i < model.generators.size(); ++i) {
    const SyncGenerator& g = model.generators[i];
    resolve(g.zone, at("generators", i) + ".zone");
    if (!(g.rating_mva > 0.0) || !finite(g.rating_mva))
      fail(at("generators", i) + ".rating must be > 0");
    if (!(g.inertia_h_s > 0.0)) fail(at("generators", i) + ".inertia_h must be > 0");
    if (!(g.droop_pu > 0.0 && g.droop_pu <= 1.0))
      fail(at("generators", i) + ".droop must be in (0, 1]");
    if (!(g.governor_tc_s > 0.0)) fail(at("generators", i) + ".governor_tc must be > 0");
    if (!(g.headroom_mw >= 0.0)) fail(at("generators", i) + ".headroom must be >= 0");
    if (!(g.damping_pu >= 0.0)) fail(at("generators", i) + ".damping must be >= 0");
  }

  for (std::size_t i = 0; i < model.interconnectors.size(); ++i) {
    const Interconnector& ic = model.interconnectors[i];
    resolve(ic.zone, at("interconnectors", i) + ".zone");
    if (!finite(ic.injection_mw)) fail(at("interconnectors", i) + ".injection must be finite");
  }

  for (std::size_t i = 0; i < model.bess_fleet.size(); ++i) {
    const BessUnit& u = model.bess_fleet[i];
    resolve(u.zone, at("bess", i) + ".zone");
    if (!(u.rating_mw > 0.0)) fail(at("bess", i) + ".rating_mw must be > 0");
    if (!(u.curve.deadband_hz >= 0.0 && u.curve.deadband_hz < u.curve.full_deviation_hz))
      fail(at("bess", i) + " requires 0 <= deadband_hz < full_deviation_hz");
    if (!(u.activation_delay_s >= 0.0 && u.activation_delay_s < u.full_delivery_s))
      fail(at("bess", i) + " requires 0 <= activation_delay_s < full_delivery_s");
    if (u.energy_capacity_mwh && !(*u.energy_capacity_mwh > 0.0))
      fail(at("bess", i) + ".energy_capacity_mwh must be > 0 or null");
  }

  const double capacity = model.total_generation_mva() + model.net_interconnector_mw();
  const double demand = model.total_demand_mw();
  if (capacity < demand * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "capacity shortfall: generation " << model.total_generation_mva() << " MVA + imports "
       << model.net_interconnector_mw() << " MW < demand " << demand << " MW";
    fail(os.str());
  }
}

Matrix build_coupling_matrix(const NetworkModel& model) {
  std::vector<WeightedEdge> edges;
  edges.reserve(model.lines.size());
  for (const Line& line : model.lines) {
    const auto a = model.zone_index(line.from);
    const auto b = model.zone_index(line.to);
    if (!a || !b) fail("line references unknown zone \"" + (!a ? line.from : line.to) + "\"");
    edges.push_back({*a, *b, line.susceptance_pu});
  }
  return graph_laplacian<double>(model.n_zones(), edges);
}

EquilibriumDispatch solve_equilibrium(const NetworkModel& model) {
  validate(model);
  const Index n = model.n_zones();
  const Index g = static_cast<Index>(model.generators.size());

  Vector net_load = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) net_load[i] = model.zones[i].demand_mw;
  for (const Interconnector& ic : model.interconnectors) net_load[*model.zone_index(ic.zone)] -= ic.injection_mw;
  const double total = net_load.sum();

  EquilibriumDispatch out;
  out.setpoint_mw = Vector::Zero(g);
  if (g > 0) {
    const double rating_sum = model.total_generation_mva();
    Index largest = 0;
    for (Index k = 0; k < g; ++k) {
      out.setpoint_mw[k] = model.generators[k].rating_mva / rating_sum * total;
      if (model.generators[k].rating_mva > model.generators[largest].rating_mva) largest = k;
    }
    // Absorb the proportional-share rounding so dispatch balances exactly.
    out.setpoint_mw[largest] += total - out.setpoint_mw.sum();
  } else if (std::abs(total) > 1e-9) {
    fail("no generators to dispatch " + std::to_string(total) + " MW of net load");
  }

  Vector injection_pu = Vector::Zero(n);
  for (Index k = 0; k < g; ++k) injection_pu[*model.zone_index(model.generators[k].zone)] += out.setpoint_mw[k];
  injection_pu -= net_load;
  injection_pu /= model.base_mva;

  out.angle_rad = Vector::Zero(n);
  const Matrix lap = build_coupling_matrix(model);
  if (n > 1) {
    // Reduced Laplacian (slack row/column dropped) is positive definite for a
    // connected graph.
    Eigen::LDLT<Matrix> solver(lap.bottomRightCorner(n - 1, n - 1));
    out.angle_rad.tail(n - 1) = solver.solve(injection_pu.tail(n - 1));
  }

  out.max_residual_pu = (injection_pu - lap * out.angle_rad).cwiseAbs().maxCoeff();
  if (!std::isfinite(out.max_residual_pu) || out.max_residual_pu > 1e-8) {
    std::ostringstream os;
    os << "equilibrium solve failed: singular reduced system or residual "
       << out.max_residual_pu << " p.u.";
    throw NumericalError(os.str());
  }
  return out;
}

}  // namespace gridfreq
