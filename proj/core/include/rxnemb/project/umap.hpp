#pragma once

#include <cstdint>
#include <vector>

#include "rxnemb/common/embedding.hpp"

namespace rxnemb::project {

// Exact k-NN (Euclidean, self excluded, ties by index), n x k row-major.
struct KnnGraph {
  int n = 0;
  int k = 0;
  std::vector<int> neighbors;
  std::vector<double> distances;  // sorted ascending per point

  int neighbor(int i, int j) const { return neighbors[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)]; }
  double distance(int i, int j) const { return distances[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)]; }
};

KnnGraph knn_graph(const EmbeddingMatrix& embs, int k);

// Per-point calibration: rho = nearest-neighbor distance; sigma solves
// sum_i exp(-max(0, d_i - rho)/sigma) = log2(k) by 64-step bisection over
// [1e-6, 1e6] (degenerate all-equal rows clamp to the bracket max).
struct SmoothKnn {
  std::vector<double> rho;
  std::vector<double> sigma;
};

SmoothKnn smooth_knn(const KnnGraph& knn);

double smooth_knn_residual(const KnnGraph& knn, const SmoothKnn& calib, int point);

// Symmetric fuzzy neighborhood graph; directed memberships
// exp(-max(0, d - rho_i)/sigma_i) combined by fuzzy union a + b - a*b.
struct FuzzyGraph {
  struct Edge {
    int a = 0;
    int b = 0;  // a < b
    double weight = 0.0;
  };
  int n = 0;
  std::vector<Edge> edges;  // sorted by (a, b)
};

FuzzyGraph fuzzy_graph(const KnnGraph& knn, const SmoothKnn& calib);

// Least-squares fit of 1/(1 + a x^(2b)) to the min_dist target curve,
// Gauss-Newton from (1, 1), 300 samples on [0, 3].
struct CurveFit {
  double a = 0.0;
  double b = 0.0;
  double rms = 0.0;
};

CurveFit fit_ab(double min_dist);

struct LayoutParams {
  int n_neighbors = 15;
  double min_dist = 0.1;
  int epochs = 300;
  int negative_samples = 5;
  double learning_rate = 1.0;
  bool standardize = true;  // per-dimension zero mean / unit variance before k-NN
  std::uint64_t seed = 7;
};

struct Layout {
  int n = 0;
  std::vector<float> xy;  // n x 2

  float x(int i) const { return xy[static_cast<std::size_t>(2 * i)]; }
  float y(int i) const { return xy[static_cast<std::size_t>(2 * i) + 1]; }
};

// Seeded-Gaussian init (sigma 10), then per epoch one attractive move per
// edge plus `negative_samples` repulsive moves, learning rate annealing
// linearly to zero. Deterministic under seed.
Layout layout_sgd(const FuzzyGraph& graph, const CurveFit& curve, const LayoutParams& params);

// Whole pipeline: (optional standardization) -> k-NN -> calibration ->
// fuzzy graph -> a/b fit -> SGD.
Layout project_embeddings(const EmbeddingMatrix& embs, const LayoutParams& params);

// Per-dimension standardization helper (constant dimensions stay zero).
EmbeddingMatrix standardize(const EmbeddingMatrix& embs);

}  // namespace rxnemb::project
