#include "gridfreq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gridfreq {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 280.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 34.0;
constexpr double kPanelGap = 48.0;
constexpr double kMarginBottom = 40.0;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double nice_step(double range, int target_ticks) {
  if (range <= 0.0) return 1.0;
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

struct Axis {
  double lo = 0.0, hi = 1.0, px0 = 0.0, px1 = 1.0;
  double map(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

void draw_frame(std::ostringstream& os, const Axis& x, const Axis& y, const std::string& ylabel) {
  os << "<rect x='" << fmt(x.px0) << "' y='" << fmt(std::min(y.px0, y.px1)) << "' width='"
     << fmt(x.px1 - x.px0) << "' height='" << fmt(std::abs(y.px1 - y.px0))
     << "' fill='none' stroke='#444'/>\n";
  const double xstep = nice_step(x.hi - x.lo, 6);
  for (double v = std::ceil(x.lo / xstep) * xstep; v <= x.hi + 1e-9; v += xstep) {
    os << "<line x1='" << fmt(x.map(v)) << "' y1='" << fmt(y.px0) << "' x2='" << fmt(x.map(v))
       << "' y2='" << fmt(y.px0 + 4) << "' stroke='#444'/>\n";
    os << "<text x='" << fmt(x.map(v)) << "' y='" << fmt(y.px0 + 16)
       << "' font-size='10' text-anchor='middle' fill='#333'>" << fmt(v) << "</text>\n";
  }
  const double ystep = nice_step(y.lo - y.hi == 0 ? 1 : std::abs(y.hi - y.lo), 5);
  for (double v = std::ceil(std::min(y.lo, y.hi) / ystep) * ystep;
       v <= std::max(y.lo, y.hi) + 1e-9; v += ystep) {
    os << "<line x1='" << fmt(x.px0 - 4) << "' y1='" << fmt(y.map(v)) << "' x2='" << fmt(x.px0)
       << "' y2='" << fmt(y.map(v)) << "' stroke='#444'/>\n";
    os << "<text x='" << fmt(x.px0 - 7) << "' y='" << fmt(y.map(v) + 3)
       << "' font-size='10' text-anchor='end' fill='#333'>" << fmt(v) << "</text>\n";
  }
  os << "<text x='14' y='" << fmt((y.px0 + y.px1) / 2.0)
     << "' font-size='11' fill='#333' transform='rotate(-90 14 " << fmt((y.px0 + y.px1) / 2.0)
     << ")' text-anchor='middle'>" << ylabel << "</text>\n";
}

void polyline(std::ostringstream& os, const Axis& x, const Axis& y, const Vector& t,
              const Vector& v, const char* color) {
  os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.2' points='";
  for (Index k = 0; k < t.size(); ++k) {
    if (k) os << ' ';
    os << fmt(x.map(t[k]), "%.2f") << ',' << fmt(y.map(v[k]), "%.2f");
  }
  os << "'/>\n";
}

}  // namespace

std::string render_run_svg(const Trace& trace, double base_demand_mw, const std::string& title) {
  const Index n = trace.n_samples();
  const double height = kMarginTop + 2 * kPanelHeight + kPanelGap + kMarginBottom;

  // Injected load delta reconstructed from the sampled loads; shed load is
  // added back so the staircase shows the attack alone.
  Vector injected(n);
  for (Index k = 0; k < n; ++k)
    injected[k] = trace.load_mw.row(k).sum() + trace.shed_mw[k] - base_demand_mw;

  double fmin = trace.coi_hz.minCoeff(), fmax = trace.coi_hz.maxCoeff();
  const double fpad = std::max(0.02, 0.08 * (fmax - fmin));
  fmin -= fpad;
  fmax += fpad;
  double imin = std::min(0.0, injected.minCoeff()), imax = std::max(1.0, injected.maxCoeff());
  const double ipad = 0.08 * (imax - imin);
  imax += ipad;

  Axis xf{trace.time_s[0], trace.time_s[n - 1], kMarginLeft, kWidth - kMarginRight};
  Axis yf{fmin, fmax, kMarginTop + kPanelHeight, kMarginTop};  // y grows downward in SVG
  Axis yi{imin, imax, kMarginTop + 2 * kPanelHeight + kPanelGap, kMarginTop + kPanelHeight + kPanelGap};

  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << fmt(kWidth) << "' height='"
     << fmt(height) << "' viewBox='0 0 " << fmt(kWidth) << ' ' << fmt(height) << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << fmt(kWidth / 2) << "' y='20' font-size='13' text-anchor='middle' "
        "fill='#111'>" << title << "</text>\n";

  draw_frame(os, xf, yf, "COI frequency (Hz)");
  for (double guide : {49.8, 49.5, 48.8}) {
    if (guide > fmin && guide < fmax) {
      os << "<line x1='" << fmt(xf.px0) << "' y1='" << fmt(yf.map(guide)) << "' x2='"
         << fmt(xf.px1) << "' y2='" << fmt(yf.map(guide))
         << "' stroke='#c0392b' stroke-dasharray='4 3' stroke-width='0.8'/>\n";
      os << "<text x='" << fmt(xf.px1 - 4) << "' y='" << fmt(yf.map(guide) - 3)
         << "' font-size='9' text-anchor='end' fill='#c0392b'>" << fmt(guide) << "</text>\n";
    }
  }
  polyline(os, xf, yf, trace.time_s, trace.coi_hz, "#1f77b4");

  Axis xi = xf;
  xi.px0 = kMarginLeft;
  draw_frame(os, xi, yi, "injected load (MW)");
  polyline(os, xi, yi, trace.time_s, injected, "#d62728");
  os << "<text x='" << fmt(kWidth / 2) << "' y='" << fmt(height - 10)
     << "' font-size='11' text-anchor='middle' fill='#333'>time (s)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace gridfreq
