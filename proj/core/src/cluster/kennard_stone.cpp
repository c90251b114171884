#include <limits>

#include "rxnemb/cluster/cluster.hpp"
#include "rxnemb/common/error.hpp"
#include "rxnemb/common/parallel.hpp"

namespace rxnemb::cluster {

std::vector<int> kennard_stone_select(int n, const DistanceFn& d, int k) {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::KTooLarge,
                "k must be in [2, n]; got k=" + std::to_string(k) + ", n=" + std::to_string(n));
  }
  // Farthest pair, smallest (i, j) on ties. Each row's best is found in
  // parallel; the cross-row argmax stays sequential and deterministic.
  std::vector<double> row_best(static_cast<std::size_t>(n),
                               -std::numeric_limits<double>::infinity());
  std::vector<int> row_arg(static_cast<std::size_t>(n), -1);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    for (int j = static_cast<int>(i) + 1; j < n; ++j) {
      const double dist = d(static_cast<int>(i), j);
      if (dist > row_best[i]) {
        row_best[i] = dist;
        row_arg[i] = j;
      }
    }
  });
  int seed_a = -1, seed_b = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (row_arg[static_cast<std::size_t>(i)] < 0) continue;
    if (row_best[static_cast<std::size_t>(i)] > best) {
      best = row_best[static_cast<std::size_t>(i)];
      seed_a = i;
      seed_b = row_arg[static_cast<std::size_t>(i)];
    }
  }

  std::vector<int> selected{seed_a, seed_b};
  std::vector<char> is_selected(static_cast<std::size_t>(n), 0);
  is_selected[static_cast<std::size_t>(seed_a)] = 1;
  is_selected[static_cast<std::size_t>(seed_b)] = 1;

  std::vector<double> min_dist(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    min_dist[i] = std::min(d(static_cast<int>(i), seed_a), d(static_cast<int>(i), seed_b));
  });

  while (static_cast<int>(selected.size()) < k) {
    int arg = -1;
    double far = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (is_selected[static_cast<std::size_t>(i)]) continue;
      if (min_dist[static_cast<std::size_t>(i)] > far) {
        far = min_dist[static_cast<std::size_t>(i)];
        arg = i;
      }
    }
    selected.push_back(arg);
    is_selected[static_cast<std::size_t>(arg)] = 1;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      if (is_selected[i]) return;
      const double dist = d(static_cast<int>(i), arg);
      if (dist < min_dist[i]) min_dist[i] = dist;
    });
  }
  return selected;
}

std::vector<int> kennard_stone_select(const DistanceMatrix& dm, int k) {
  return kennard_stone_select(dm.n, [&dm](int i, int j) { return dm.at(i, j); }, k);
}

std::vector<int> kennard_stone_select(const EmbeddingMatrix& embs, Metric metric, int k) {
  return kennard_stone_select(
      embs.count, [&embs, metric](int i, int j) { return row_distance(embs, i, j, metric); }, k);
}

ClusterAssignment assign_nearest(int n, const DistanceFn& d,
                                 const std::vector<int>& centroid_indices) {
  if (centroid_indices.empty()) {
    throw Error(ErrorCode::EmptySet, "assign_nearest needs at least one centroid");
  }
  for (int c : centroid_indices) {
    if (c < 0 || c >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "centroid index " + std::to_string(c));
    }
  }
  ClusterAssignment out;
  out.k = static_cast<int>(centroid_indices.size());
  out.centroid_indices = centroid_indices;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    int best = 0;
    double best_dist = d(static_cast<int>(i), centroid_indices[0]);
    for (int c = 1; c < out.k; ++c) {
      const double dist = d(static_cast<int>(i), centroid_indices[static_cast<std::size_t>(c)]);
      if (dist < best_dist) {  // strict: ties keep the lowest centroid position
        best_dist = dist;
        best = c;
      }
    }
    out.labels[i] = best;
  });
  return out;
}

ClusterAssignment assign_nearest(const DistanceMatrix& dm,
                                 const std::vector<int>& centroid_indices) {
  return assign_nearest(dm.n, [&dm](int i, int j) { return dm.at(i, j); }, centroid_indices);
}

ClusterAssignment assign_nearest(const EmbeddingMatrix& embs, Metric metric,
                                 const std::vector<int>& centroid_indices) {
  return assign_nearest(
      embs.count, [&embs, metric](int i, int j) { return row_distance(embs, i, j, metric); },
      centroid_indices);
}

const char* inter_group_mode_name(InterGroupMode m) {
  switch (m) {
    case InterGroupMode::MeanEmbedding: return "mean";
    case InterGroupMode::AveragePairwise: return "average_pairwise";
    case InterGroupMode::Medoid: return "medoid";
  }
  return "mean";
}

InterGroupMode inter_group_mode_from_name(const std::string& name) {
  if (name == "mean") return InterGroupMode::MeanEmbedding;
  if (name == "average_pairwise") return InterGroupMode::AveragePairwise;
  if (name == "medoid") return InterGroupMode::Medoid;
  throw Error(ErrorCode::ConfigError, "unknown inter-group mode '" + name + "'");
}

GroupSummary group_centroid_vectors(const EmbeddingMatrix& embs,
                                    const ClusterAssignment& assignment, Metric metric,
                                    InterGroupMode mode) {
  const int k = assignment.k;
  const int dim = embs.dim;
  GroupSummary out;
  out.means.count = k;
  out.means.dim = dim;
  out.means.values.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(dim), 0.0f);
  out.sizes.assign(static_cast<std::size_t>(k), 0);

  std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                        std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  for (int i = 0; i < embs.count; ++i) {
    const int c = assignment.labels[static_cast<std::size_t>(i)];
    out.sizes[static_cast<std::size_t>(c)]++;
    const float* r = embs.row(i);
    for (int d = 0; d < dim; ++d) sums[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] += r[d];
  }
  for (int c = 0; c < k; ++c) {
    const int sz = out.sizes[static_cast<std::size_t>(c)];
    for (int d = 0; d < dim; ++d) {
      out.means.values[static_cast<std::size_t>(c) * static_cast<std::size_t>(dim) +
                       static_cast<std::size_t>(d)] =
          sz ? static_cast<float>(sums[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)] /
                                  sz)
             : 0.0f;
    }
  }

  out.distances.n = k;
  out.distances.metric = metric;
  out.distances.values.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0.0);
  switch (mode) {
    case InterGroupMode::MeanEmbedding:
      out.distances = pairwise_distances(out.means, metric);
      break;
    case InterGroupMode::AveragePairwise: {
      std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
      for (int i = 0; i < embs.count; ++i) {
        members[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(i)])].push_back(i);
      }
      for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
          double acc = 0.0;
          std::size_t pairs = 0;
          for (int i : members[static_cast<std::size_t>(a)]) {
            for (int j : members[static_cast<std::size_t>(b)]) {
              acc += row_distance(embs, i, j, metric);
              ++pairs;
            }
          }
          const double d = pairs ? acc / static_cast<double>(pairs) : 0.0;
          out.distances.at(a, b) = d;
          out.distances.at(b, a) = d;
        }
      }
      break;
    }
    case InterGroupMode::Medoid: {
      std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
      for (int i = 0; i < embs.count; ++i) {
        members[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(i)])].push_back(i);
      }
      std::vector<int> medoids(static_cast<std::size_t>(k), -1);
      for (int c = 0; c < k; ++c) {
        double best = std::numeric_limits<double>::infinity();
        for (int i : members[static_cast<std::size_t>(c)]) {
          double acc = 0.0;
          for (int j : members[static_cast<std::size_t>(c)]) {
            if (i != j) acc += row_distance(embs, i, j, metric);
          }
          if (acc < best) {
            best = acc;
            medoids[static_cast<std::size_t>(c)] = i;
          }
        }
      }
      for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
          const double d = row_distance(embs, medoids[static_cast<std::size_t>(a)],
                                        medoids[static_cast<std::size_t>(b)], metric);
          out.distances.at(a, b) = d;
          out.distances.at(b, a) = d;
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace rxnemb::cluster
