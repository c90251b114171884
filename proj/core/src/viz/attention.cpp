#include "rxnemb/viz/attention.hpp"

#include <algorithm>

#include "rxnemb/common/error.hpp"

namespace rxnemb::viz {

std::vector<MoleculeIntensities> aggregate_pool_attention(const encoder::SideAttention& side) {
  std::vector<MoleculeIntensities> out;
  out.reserve(side.molecules.size());
  for (const encoder::MoleculePooling& mol : side.molecules) {
    MoleculeIntensities mi;
    mi.raw = mol.atom_weights;
    const float peak = mi.raw.empty() ? 1.0f : *std::max_element(mi.raw.begin(), mi.raw.end());
    mi.intensity.reserve(mi.raw.size());
    for (float w : mi.raw) mi.intensity.push_back(peak > 0.0f ? w / peak : 0.0f);
    out.push_back(std::move(mi));
  }
  return out;
}

InterMoleculeAttention aggregate_transformer_attention(const encoder::SideAttention& side) {
  if (side.transformer.empty()) {
    throw Error(ErrorCode::EmptySet, "no transformer layers recorded");
  }
  std::vector<int> live;
  for (std::size_t i = 0; i < side.row_mask.size(); ++i) {
    if (side.row_mask[i]) live.push_back(static_cast<int>(i));
  }
  InterMoleculeAttention out;
  out.n = static_cast<int>(live.size());
  out.values.assign(static_cast<std::size_t>(out.n) * static_cast<std::size_t>(out.n), 0.0);

  std::size_t matrices = 0;
  for (const auto& layer : side.transformer) matrices += layer.size();
  for (const auto& layer : side.transformer) {
    for (const encoder::HeadMatrix& head : layer) {
      for (int i = 0; i < out.n; ++i) {
        for (int j = 0; j < out.n; ++j) {
          out.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(out.n) +
                     static_cast<std::size_t>(j)] +=
              static_cast<double>(
                  head.values[static_cast<std::size_t>(live[static_cast<std::size_t>(i)]) *
                                  static_cast<std::size_t>(head.n) +
                              static_cast<std::size_t>(live[static_cast<std::size_t>(j)])]) /
              static_cast<double>(matrices);
        }
      }
    }
  }
  for (int i = 0; i < out.n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < out.n; ++j) row_sum += out.at(i, j);
    if (row_sum > 0.0) {
      for (int j = 0; j < out.n; ++j) {
        out.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(out.n) +
                   static_cast<std::size_t>(j)] /= row_sum;
      }
    }
  }
  return out;
}

}  // namespace rxnemb::viz
