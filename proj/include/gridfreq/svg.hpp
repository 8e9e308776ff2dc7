#pragma once

#include <string>

#include "gridfreq/trace.hpp"

namespace gridfreq {

/// Two-panel vector plot of a run: COI frequency against time on top, the
/// injected load-delta staircase below. Every trace sample becomes one
/// polyline point; nothing is resampled.
std::string render_run_svg(const Trace& trace, double base_demand_mw, const std::string& title);

}  // namespace gridfreq
