#pragma once

#include <vector>

#include "rxnemb/encoder/forward.hpp"

namespace rxnemb::viz {

struct MoleculeIntensities {
  std::vector<float> raw;        // pooling weights, sum 1 per molecule
  std::vector<float> intensity;  // raw rescaled by the molecule max -> top atom is 1
};

// Rendering contract for attention maps: within each molecule the top atom
// maps to full intensity; raw weights ride along untouched.
std::vector<MoleculeIntensities> aggregate_pool_attention(const encoder::SideAttention& side);

// Mean over layers and heads of the Transformer attention, masked entries
// excluded, rows renormalized to sum 1; restricted to live components.
struct InterMoleculeAttention {
  int n = 0;
  std::vector<double> values;  // n x n row-major

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(j)];
  }
};

InterMoleculeAttention aggregate_transformer_attention(const encoder::SideAttention& side);

}  // namespace rxnemb::viz
