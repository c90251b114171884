#pragma once

#include <string>
#include <vector>

#include "rxnemb/common/embedding.hpp"

namespace rxnemb::io {

// Embedding file: one-line JSON header {count, emb_dim, skipped, ids}
// followed by a little-endian float32 matrix (count x emb_dim). Round trip
// is bit-exact.
struct EmbeddingFile {
  EmbeddingMatrix matrix;
  std::vector<std::string> ids;
  int skipped = 0;
};

void save_embeddings(const std::string& path, const EmbeddingFile& file);
EmbeddingFile load_embeddings(const std::string& path);

}  // namespace rxnemb::io
