#pragma once

#include <span>
#include <string>

#include "commute/metrics.hpp"

namespace commute {

// Static SVG line charts of the aggregated series. One panel per scenario
// for mode shares; one panel per indicator (accidents, CO2, speed) with one
// line per scenario. CI bounds are drawn as dotted lines.
std::string render_shares_svg(std::span<const IndicatorSeries> series);
std::string render_indicators_svg(std::span<const IndicatorSeries> series);

}  // namespace commute
