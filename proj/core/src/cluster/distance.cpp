#include <cmath>

#include "rxnemb/cluster/cluster.hpp"
#include "rxnemb/common/error.hpp"
#include "rxnemb/common/parallel.hpp"

namespace rxnemb::cluster {

const char* metric_name(Metric m) {
  return m == Metric::Euclidean ? "euclidean" : "cosine";
}

Metric metric_from_name(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "cosine") return Metric::Cosine;
  throw Error(ErrorCode::ConfigError, "unknown metric '" + name + "'");
}

double row_distance(const EmbeddingMatrix& embs, int i, int j, Metric metric) {
  const float* a = embs.row(i);
  const float* b = embs.row(j);
  const int dim = embs.dim;
  if (metric == Metric::Euclidean) {
    double acc = 0.0;
    for (int d = 0; d < dim; ++d) {
      const double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int d = 0; d < dim; ++d) {
    dot += static_cast<double>(a[d]) * static_cast<double>(b[d]);
    na += static_cast<double>(a[d]) * static_cast<double>(a[d]);
    nb += static_cast<double>(b[d]) * static_cast<double>(b[d]);
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::ZeroVectorCosine, "cosine distance undefined for a zero vector");
  }
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

DistanceMatrix pairwise_distances(const EmbeddingMatrix& embs, Metric metric) {
  if (embs.count < 2) {
    throw Error(ErrorCode::EmptySet, "pairwise_distances needs at least 2 embeddings");
  }
  if (embs.dim <= 0 ||
      embs.values.size() !=
          static_cast<std::size_t>(embs.count) * static_cast<std::size_t>(embs.dim)) {
    throw Error(ErrorCode::LengthMismatch, "embedding matrix shape is inconsistent");
  }
  // Cosine rejects zero vectors up front so the parallel fill stays total.
  if (metric == Metric::Cosine) {
    for (int i = 0; i < embs.count; ++i) {
      double norm = 0.0;
      const float* r = embs.row(i);
      for (int d = 0; d < embs.dim; ++d) norm += static_cast<double>(r[d]) * r[d];
      if (norm == 0.0) {
        throw Error(ErrorCode::ZeroVectorCosine,
                    "embedding " + std::to_string(i) + " is the zero vector");
      }
    }
  }
  DistanceMatrix dm;
  dm.n = embs.count;
  dm.metric = metric;
  dm.values.assign(static_cast<std::size_t>(dm.n) * static_cast<std::size_t>(dm.n), 0.0);
  parallel_for(static_cast<std::size_t>(dm.n), [&](std::size_t i) {
    for (int j = static_cast<int>(i) + 1; j < dm.n; ++j) {
      const double d = row_distance(embs, static_cast<int>(i), j, metric);
      dm.at(static_cast<int>(i), j) = d;
      dm.at(j, static_cast<int>(i)) = d;
    }
  });
  return dm;
}

}  // namespace rxnemb::cluster
