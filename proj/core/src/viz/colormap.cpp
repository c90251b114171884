#include "rxnemb/viz/colormap.hpp"

#include <algorithm>

namespace rxnemb::viz {

Rgb Colormap::at(double v) const {
  v = std::clamp(v, 0.0, 1.0);
  if (stops.empty()) return {0, 0, 0};
  if (v <= stops.front().value) return stops.front().color;
  if (v >= stops.back().value) return stops.back().color;
  for (std::size_t s = 1; s < stops.size(); ++s) {
    if (v > stops[s].value) continue;
    const ColorStop& lo = stops[s - 1];
    const ColorStop& hi = stops[s];
    const double t = (v - lo.value) / (hi.value - lo.value);
    Rgb out;
    for (int c = 0; c < 3; ++c) {
      // truncation keeps the documented midpoint (197,114,112) exact
      out[static_cast<std::size_t>(c)] = static_cast<int>(
          lo.color[static_cast<std::size_t>(c)] +
          (hi.color[static_cast<std::size_t>(c)] - lo.color[static_cast<std::size_t>(c)]) * t);
    }
    return out;
  }
  return stops.back().color;
}

const Colormap& red_scale_map() {
  static const Colormap map{{{0.0, {255, 228, 225}}, {1.0, {139, 0, 0}}}};
  return map;
}

Rgb red_scale(double v) { return red_scale_map().at(v); }

const Colormap& distance_map() {
  static const Colormap map{{{0.0, {5, 48, 97}}, {1.0, {103, 0, 31}}}};
  return map;
}

}  // namespace rxnemb::viz
