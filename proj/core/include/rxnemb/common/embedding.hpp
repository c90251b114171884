#pragma once

#include <string>
#include <vector>

namespace rxnemb {

// Row-major count x dim float matrix; the in-memory form of an embedding
// file and the input to the clustering / projection stages.
struct EmbeddingMatrix {
  int count = 0;
  int dim = 0;
  std::vector<float> values;

  const float* row(int i) const {
    return values.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim);
  }
};

}  // namespace rxnemb
