#include <limits>

#include "rxnemb/cluster/cluster.hpp"
#include "rxnemb/common/error.hpp"

namespace rxnemb::cluster {

// UPGMA. The active list stays ordered by node id (leaves first, merged
// nodes appended), so scanning pairs in order and keeping the first strict
// minimum realizes the smallest-(i,j) lexicographic tie rule.
Dendrogram average_linkage_tree(const DistanceMatrix& dm) {
  const int n = dm.n;
  if (n < 2) {
    throw Error(ErrorCode::EmptySet, "average_linkage_tree needs at least 2 items");
  }
  Dendrogram tree;
  tree.leaves = n;

  struct Active {
    int node;
    int size;
  };
  std::vector<Active> active;
  active.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active.push_back({i, 1});

  std::vector<std::vector<double>> dist(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dm.at(i, j);
    }
  }

  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        if (dist[a][b] < best) {
          best = dist[a][b];
          best_a = a;
          best_b = b;
        }
      }
    }
    const int new_node = tree.leaves + static_cast<int>(tree.merges.size());
    tree.merges.push_back({active[best_a].node, active[best_b].node, best});
    const double wa = active[best_a].size;
    const double wb = active[best_b].size;

    // Append the merged cluster's distances, then drop rows/cols a and b.
    std::vector<double> merged_row(active.size() + 1, 0.0);
    for (std::size_t c = 0; c < active.size(); ++c) {
      if (c == best_a || c == best_b) continue;
      merged_row[c] = (wa * dist[best_a][c] + wb * dist[best_b][c]) / (wa + wb);
    }
    for (std::size_t c = 0; c < active.size(); ++c) dist[c].push_back(merged_row[c]);
    dist.push_back(std::move(merged_row));
    active.push_back({new_node, active[best_a].size + active[best_b].size});

    for (std::size_t victim : {best_b, best_a}) {  // erase larger index first
      active.erase(active.begin() + static_cast<std::ptrdiff_t>(victim));
      dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(victim));
      for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(victim));
    }
  }
  return tree;
}

}  // namespace rxnemb::cluster
