#include "commute/plot.hpp"

#include <algorithm>
#include <cstdio>

namespace commute {

namespace {

template <typename... Args>
std::string strf(const char* format, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

constexpr int kPanelW = 360;
constexpr int kPanelH = 280;
constexpr int kMarginL = 52;
constexpr int kMarginR = 14;
constexpr int kMarginT = 34;
constexpr int kMarginB = 40;

const char* kModeColors[kNumModes] = {"#d95f02", "#1b9e77", "#7570b3"};
const char* kScenarioColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Panel {
  double x0, y0;          // top-left of panel
  double lo, hi;          // y range
  int horizon;

  double px(int t) const {
    const double w = kPanelW - kMarginL - kMarginR;
    return x0 + kMarginL + (horizon <= 1 ? 0.0 : w * t / (horizon - 1));
  }
  double py(double v) const {
    const double h = kPanelH - kMarginT - kMarginB;
    const double f = hi == lo ? 0.5 : (v - lo) / (hi - lo);
    return y0 + kMarginT + h * (1.0 - f);
  }
};

void polyline(std::string& svg, const Panel& p, std::span<const double> values,
              const char* color, bool dotted) {
  svg += strf("<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"%.1f\"%s points=\"",
              color, dotted ? 1.0 : 1.8, dotted ? " stroke-dasharray=\"3,3\"" : "");
  for (int t = 0; t < static_cast<int>(values.size()); ++t)
    svg += strf("%.1f,%.1f ", p.px(t), p.py(values[t]));
  svg += "\"/>\n";
}

void panel_frame(std::string& svg, const Panel& p, const std::string& title) {
  const double ax = p.x0 + kMarginL;
  const double ay = p.y0 + kMarginT;
  const double w = kPanelW - kMarginL - kMarginR;
  const double h = kPanelH - kMarginT - kMarginB;
  svg += strf(
      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
      "stroke=\"#888\"/>\n",
      ax, ay, w, h);
  svg += strf(
      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" font-family=\"sans-serif\" "
      "text-anchor=\"middle\">%s</text>\n",
      p.x0 + kPanelW / 2.0, p.y0 + 20.0, title.c_str());
  for (int i = 0; i <= 4; ++i) {
    const double v = p.lo + (p.hi - p.lo) * i / 4.0;
    svg += strf(
        "<text x=\"%.1f\" y=\"%.1f\" font-size=\"9\" font-family=\"sans-serif\" "
        "text-anchor=\"end\">%.2f</text>\n",
        ax - 4.0, p.py(v) + 3.0, v);
  }
  svg += strf(
      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" font-family=\"sans-serif\" "
      "text-anchor=\"middle\">period</text>\n",
      ax + w / 2.0, p.y0 + kPanelH - 10.0);
}

std::vector<double> cell_series(const IndicatorSeries& s, Indicator ind, int slot,
                                double SeriesCell::* field) {
  std::vector<double> out(s.horizon);
  for (int t = 0; t < s.horizon; ++t) out[t] = s.cell(t, ind, slot).*field;
  return out;
}

std::string svg_open(int width, int height) {
  return strf(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
      "viewBox=\"0 0 %d %d\">\n<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n",
      width, height, width, height);
}

}  // namespace

std::string render_shares_svg(std::span<const IndicatorSeries> series) {
  const int n = static_cast<int>(series.size());
  const int width = std::max(1, n) * kPanelW;
  std::string svg = svg_open(width, kPanelH + 22);

  for (int i = 0; i < n; ++i) {
    const IndicatorSeries& s = series[i];
    Panel p{static_cast<double>(i) * kPanelW, 0.0, 0.0, 1.0, s.horizon};
    panel_frame(svg, p, "mode shares: " + s.scenario);
    for (int m = 0; m < kNumModes; ++m) {
      polyline(svg, p, cell_series(s, Indicator::Share, m, &SeriesCell::mean), kModeColors[m],
               false);
      polyline(svg, p, cell_series(s, Indicator::Share, m, &SeriesCell::ci_lo), kModeColors[m],
               true);
      polyline(svg, p, cell_series(s, Indicator::Share, m, &SeriesCell::ci_hi), kModeColors[m],
               true);
    }
  }
  for (int m = 0; m < kNumModes; ++m) {
    svg += strf(
        "<text x=\"%d\" y=\"%d\" font-size=\"11\" font-family=\"sans-serif\" "
        "fill=\"%s\">%s</text>\n",
        14 + m * 110, kPanelH + 14, kModeColors[m],
        std::string(mode_name(static_cast<Mode>(m))).c_str());
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_indicators_svg(std::span<const IndicatorSeries> series) {
  const Indicator panels[3] = {Indicator::AccidentRate, Indicator::Co2Tons,
                               Indicator::AvgSpeed};
  const char* titles[3] = {"accident rate (per 100k)", "CO2 (tons)", "avg speed (km/h)"};
  std::string svg = svg_open(3 * kPanelW, kPanelH + 22);

  for (int pi = 0; pi < 3; ++pi) {
    double lo = 1e300, hi = -1e300;
    for (const IndicatorSeries& s : series) {
      for (int t = 0; t < s.horizon; ++t) {
        lo = std::min(lo, s.cell(t, panels[pi], kModeSlotAll).ci_lo);
        hi = std::max(hi, s.cell(t, panels[pi], kModeSlotAll).ci_hi);
      }
    }
    if (lo > hi) lo = 0.0, hi = 1.0;
    const double pad = (hi - lo) * 0.08 + 1e-9;
    Panel p{static_cast<double>(pi) * kPanelW, 0.0, std::max(0.0, lo - pad), hi + pad,
            series.empty() ? 1 : series[0].horizon};
    panel_frame(svg, p, titles[pi]);
    for (size_t si = 0; si < series.size(); ++si) {
      const char* color = kScenarioColors[si % 4];
      polyline(svg, p, cell_series(series[si], panels[pi], kModeSlotAll, &SeriesCell::mean),
               color, false);
      polyline(svg, p, cell_series(series[si], panels[pi], kModeSlotAll, &SeriesCell::ci_lo),
               color, true);
      polyline(svg, p, cell_series(series[si], panels[pi], kModeSlotAll, &SeriesCell::ci_hi),
               color, true);
    }
  }
  for (size_t si = 0; si < series.size(); ++si) {
    svg += strf(
        "<text x=\"%d\" y=\"%d\" font-size=\"11\" font-family=\"sans-serif\" "
        "fill=\"%s\">%s</text>\n",
        14 + static_cast<int>(si) * 160, kPanelH + 14, kScenarioColors[si % 4],
        series[si].scenario.c_str());
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace commute
