#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rxnemb/common/embedding.hpp"

namespace rxnemb::cluster {

enum class Metric { Euclidean, Cosine };

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// Symmetric pairwise distances with zero diagonal, stored densely.
struct DistanceMatrix {
  int n = 0;
  Metric metric = Metric::Euclidean;
  std::vector<double> values;  // n x n row-major

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(j)];
  }
  double& at(int i, int j) {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                  static_cast<std::size_t>(j)];
  }
};

// Distance between two embedding rows, computed on the fly (the 10k-scale
// pipeline never materializes the full n x n matrix).
double row_distance(const EmbeddingMatrix& embs, int i, int j, Metric metric);

DistanceMatrix pairwise_distances(const EmbeddingMatrix& embs, Metric metric);

// Any symmetric nonnegative pair distance; backs both the matrix and the
// embedding route through KS / assignment.
using DistanceFn = std::function<double(int, int)>;

// Kennard-Stone selection: seed with the globally farthest pair (smallest
// (i,j) on ties), then repeatedly add argmax_i min_{j in selected} d(i,j)
// (smallest index on ties) until k points are chosen.
std::vector<int> kennard_stone_select(int n, const DistanceFn& d, int k);
std::vector<int> kennard_stone_select(const DistanceMatrix& dm, int k);
std::vector<int> kennard_stone_select(const EmbeddingMatrix& embs, Metric metric, int k);

struct ClusterAssignment {
  int k = 0;
  std::vector<int> centroid_indices;
  std::vector<int> labels;  // per item, in [0, k)
};

// Nearest-centroid labels; ties resolve to the lowest centroid position.
ClusterAssignment assign_nearest(int n, const DistanceFn& d,
                                 const std::vector<int>& centroid_indices);
ClusterAssignment assign_nearest(const DistanceMatrix& dm,
                                 const std::vector<int>& centroid_indices);
ClusterAssignment assign_nearest(const EmbeddingMatrix& embs, Metric metric,
                                 const std::vector<int>& centroid_indices);

enum class InterGroupMode { MeanEmbedding, AveragePairwise, Medoid };

const char* inter_group_mode_name(InterGroupMode m);
InterGroupMode inter_group_mode_from_name(const std::string& name);

struct GroupSummary {
  EmbeddingMatrix means;      // k x dim arithmetic means
  DistanceMatrix distances;   // k x k inter-group matrix
  std::vector<int> sizes;     // members per cluster
};

GroupSummary group_centroid_vectors(const EmbeddingMatrix& embs,
                                    const ClusterAssignment& assignment, Metric metric,
                                    InterGroupMode mode = InterGroupMode::MeanEmbedding);

// Binary merge tree over k leaves. Leaves are 0..k-1, internal nodes are
// k..2k-2 in merge order; heights are non-decreasing under average linkage.
struct Dendrogram {
  struct Merge {
    int left = 0;
    int right = 0;
    double height = 0.0;
  };
  int leaves = 0;
  std::vector<Merge> merges;  // exactly leaves-1
};

// UPGMA; ties merge the lexicographically smallest active pair.
Dendrogram average_linkage_tree(const DistanceMatrix& dm);

// Bar-Joseph optimal leaf ordering: among the 2^(k-1) orders reachable by
// flipping subtrees, the one minimizing the sum of adjacent-leaf distances
// (lexicographically smallest permutation on cost ties).
std::vector<int> optimal_leaf_order(const Dendrogram& tree, const DistanceMatrix& dm);

double leaf_order_cost(const std::vector<int>& order, const DistanceMatrix& dm);

}  // namespace rxnemb::cluster
