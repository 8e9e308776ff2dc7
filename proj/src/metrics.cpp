#include "gridfreq/metrics.hpp"

#include <algorithm>

namespace gridfreq {

double max_rocof(const Trace& trace, double window_s) {
  return extreme_windowed_slope(trace.time_s, trace.coi_hz, window_s, 50.0);
}

double max_rocof_zonal(const Trace& trace, double window_s) {
  double worst = 0.0;
  for (Index z = 0; z < trace.freq_hz.cols(); ++z) {
    const double slope = extreme_windowed_slope(trace.time_s, trace.freq_hz.col(z), window_s, 50.0);
    if (std::abs(slope) > std::abs(worst)) worst = slope;
  }
  return worst;
}

std::pair<double, double> nadir(const Trace& trace) {
  if (trace.n_samples() == 0) throw ValidationError("nadir: empty trace");
  Index best = 0;
  for (Index k = 1; k < trace.n_samples(); ++k) {
    if (trace.coi_hz[k] < trace.coi_hz[best]) best = k;  // ties keep the earlier time
  }
  return {trace.coi_hz[best], trace.time_s[best]};
}

double settling_frequency(const Trace& trace, double tail_s) {
  if (!(trace.span_s() > tail_s))
    throw ValidationError("settling_frequency: trace span must exceed the tail");
  const double start = trace.time_s[trace.n_samples() - 1] - tail_s;
  double sum = 0.0;
  Index count = 0;
  for (Index k = 0; k < trace.n_samples(); ++k) {
    if (trace.time_s[k] >= start - 1e-12) {
      sum += trace.coi_hz[k];
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

FrequencyMetrics compute_metrics(const Trace& trace, const ProtectionPolicy& policy,
                                 double rocof_window_s, double settling_tail_s) {
  FrequencyMetrics m;
  std::tie(m.nadir_hz, m.nadir_time_s) = nadir(trace);
  m.max_rocof_pu_s = max_rocof(trace, rocof_window_s);
  m.max_rocof_zonal_pu_s = max_rocof_zonal(trace, rocof_window_s);
  m.settling_freq_hz = settling_frequency(trace, settling_tail_s);
  const ViolationReport report = classify_excursion(trace, policy);
  m.first_crossing_s = report.first_crossing_s;
  m.band = report.worst;
  m.rocof_violation = report.rocof_violation;
  for (const TraceEvent& e : trace.events) {
    if (e.kind == "ufls_trip") m.ufls_triggered = true;
  }
  return m;
}

}  // namespace gridfreq
