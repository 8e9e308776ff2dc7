#pragma once

#include <cmath>
#include <map>
#include <utility>

#include "gridfreq/errors.hpp"
#include "gridfreq/protection.hpp"
#include "gridfreq/trace.hpp"
#include "gridfreq/types.hpp"

namespace gridfreq {

/// Signed windowed slope of largest magnitude: max over i of
/// (v[i+k] - v[i]) / (t[i+k] - t[i]) / denom where k spans the window.
/// Requires uniformly sampled t covering at least one window.
template <typename DerivedT, typename DerivedV>
double extreme_windowed_slope(const Eigen::MatrixBase<DerivedT>& t,
                              const Eigen::MatrixBase<DerivedV>& v, double window_s,
                              double denom) {
  const Index n = t.size();
  if (n < 2) throw ValidationError("rocof: trace has fewer than two samples");
  const double dt = t[1] - t[0];
  if (!(t[n - 1] - t[0] >= window_s - 1e-12))
    throw ValidationError("rocof: trace span is shorter than the window");
  const Index k = std::max<Index>(1, static_cast<Index>(std::llround(window_s / dt)));
  double worst = 0.0;
  for (Index i = 0; i + k < n; ++i) {
    const double slope = (v[i + k] - v[i]) / (t[i + k] - t[i]) / denom;
    if (std::abs(slope) > std::abs(worst)) worst = slope;
  }
  return worst;
}

/// Largest-magnitude windowed COI slope in p.u./s on the 50 Hz base.
double max_rocof(const Trace& trace, double window_s = 0.5);

/// Same measure on each zone's local frequency; returns the worst over zones.
double max_rocof_zonal(const Trace& trace, double window_s = 0.5);

/// Minimum COI sample and its first occurrence time.
std::pair<double, double> nadir(const Trace& trace);

/// Mean COI frequency over the final tail seconds.
double settling_frequency(const Trace& trace, double tail_s = 10.0);

/// The metric columns of a study row.
struct FrequencyMetrics {
  double nadir_hz = 0.0;
  double nadir_time_s = 0.0;
  double max_rocof_pu_s = 0.0;        // COI
  double max_rocof_zonal_pu_s = 0.0;  // worst zone
  double settling_freq_hz = 0.0;
  std::map<double, double> first_crossing_s;
  bool ufls_triggered = false;
  Band band = Band::None;
  bool rocof_violation = false;
};

FrequencyMetrics compute_metrics(const Trace& trace, const ProtectionPolicy& policy = {},
                                 double rocof_window_s = 0.5, double settling_tail_s = 10.0);

}  // namespace gridfreq
