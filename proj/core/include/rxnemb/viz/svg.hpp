#pragma once

#include <string>
#include <vector>

#include "rxnemb/chem/molecule.hpp"
#include "rxnemb/cluster/cluster.hpp"

namespace rxnemb::viz {

// Every renderer yields the SVG bytes plus a machine-readable JSON sidecar
// (cell values / atom weights / point rows) so tests never parse SVG.
// Output bytes are a pure function of the inputs.
struct RenderOutput {
  std::string svg;
  std::string sidecar_json;
};

// n x n cell grid in `order`, blue (near) to red (far) over [0, max
// distance]; row/column labels from `labels`.
RenderOutput render_heatmap_svg(const cluster::DistanceMatrix& dm, const std::vector<int>& order,
                                const std::vector<std::string>& labels);

// One row of labeled atom circles per molecule (reactant rows first,
// product rows directly below), filled by red_scale(intensity).
RenderOutput render_attention_svg(const chem::Reaction& rxn,
                                  const std::vector<std::vector<float>>& intensities);

struct ScatterPoint {
  float x = 0.0f;
  float y = 0.0f;
  int tag = 0;  // index into tag_names
};

// 2-D scatter with one marker per point, a legend per dataset tag and 5%
// axis margins. At most 8 tags.
RenderOutput render_scatter_svg(const std::vector<ScatterPoint>& points,
                                const std::vector<std::string>& tag_names);

}  // namespace rxnemb::viz
