#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridfreq/services.hpp"
#include "gridfreq/types.hpp"

namespace gridfreq {

struct Zone {
  std::string id;
  double demand_mw = 0.0;
  double sheddable_fraction = 0.05;  // portion of demand eligible for UFLS
};

struct Line {
  std::string from;
  std::string to;
  double susceptance_pu = 0.0;  // on system base, > 0
  double rating_mw = 0.0;       // informational
};

struct SyncGenerator {
  std::string zone;
  double rating_mva = 0.0;
  double inertia_h_s = 5.0;
  double droop_pu = 0.05;
  double governor_tc_s = 8.0;
  double headroom_mw = 0.0;  // spinning reserve above dispatch
  double damping_pu = 1.0;
};

struct Interconnector {
  std::string zone;
  double injection_mw = 0.0;  // signed, positive = import
};

/// Static system description. Immutable after construction; safe to share
/// across concurrent simulation runs.
struct NetworkModel {
  double base_mva = 100.0;
  double nominal_freq_hz = 50.0;
  std::vector<Zone> zones;
  std::vector<Line> lines;
  std::vector<SyncGenerator> generators;
  std::vector<Interconnector> interconnectors;
  std::vector<BessUnit> bess_fleet;

  Index n_zones() const { return static_cast<Index>(zones.size()); }
  std::optional<Index> zone_index(std::string_view id) const;
  double total_demand_mw() const;
  double total_generation_mva() const;
  double net_interconnector_mw() const;
};

/// Checks every structural invariant: unique zone ids, positive ratings and
/// susceptances, no dangling zone references, connected line graph, and
/// generation capacity plus imports covering demand. Throws ValidationError
/// naming the offending field.
void validate(const NetworkModel& model);

struct WeightedEdge {
  Index i = 0;
  Index j = 0;
  double weight = 0.0;
};

/// Weighted graph Laplacian: diagonal holds the summed incident weights,
/// off-diagonal (i, j) the negated summed weights between i and j.
template <typename Scalar>
MatrixX<Scalar> graph_laplacian(Index n, const std::vector<WeightedEdge>& edges) {
  MatrixX<Scalar> lap = MatrixX<Scalar>::Zero(n, n);
  for (const WeightedEdge& e : edges) {
    const Scalar w = static_cast<Scalar>(e.weight);
    lap(e.i, e.i) += w;
    lap(e.j, e.j) += w;
    lap(e.i, e.j) -= w;
    lap(e.j, e.i) -= w;
  }
  return lap;
}

/// Susceptance Laplacian of the line graph, per unit on base_mva. Symmetric,
/// zero row sums, rank n-1 for a connected model.
Matrix build_coupling_matrix(const NetworkModel& model);

struct EquilibriumDispatch {
  Vector setpoint_mw;      // per generator
  Vector angle_rad;        // per zone, slack = zone index 0
  double max_residual_pu;  // worst per-zone power-balance residual
};

/// Pre-disturbance steady state at nominal frequency: net load shared across
/// generators proportionally to rating, angles from the DC power-flow solve
/// with zone 0 as the slack reference.
EquilibriumDispatch solve_equilibrium(const NetworkModel& model);

}  // namespace gridfreq
