#pragma once

#include <array>
#include <vector>

namespace rxnemb::viz {

using Rgb = std::array<int, 3>;

struct ColorStop {
  double value = 0.0;  // in [0, 1]
  Rgb color{0, 0, 0};
};

// Piecewise-linear colormap; endpoints are hit exactly, inputs clamp to [0,1].
struct Colormap {
  std::vector<ColorStop> stops;

  Rgb at(double v) const;
};

// Light pink (255,228,225) to deep red (139,0,0); the attention palette.
const Colormap& red_scale_map();
Rgb red_scale(double v);

// Distance palette: deep blue (5,48,97) at 0 to deep red (103,0,31) at max.
// Two stops so the red channel is monotone in distance.
const Colormap& distance_map();

}  // namespace rxnemb::viz
