#include <algorithm>
#include <limits>
#include <map>

#include "rxnemb/cluster/cluster.hpp"
#include "rxnemb/common/error.hpp"

namespace rxnemb::cluster {

namespace {

struct NodeTables {
  std::vector<int> leaves;                    // leaf ids in subtree, in-order
  std::map<std::pair<int, int>, double> best;  // (first leaf, last leaf) -> min cost
};

struct Solver {
  const Dendrogram& tree;
  const DistanceMatrix& dm;
  std::vector<int> left_child, right_child;  // -1 for leaves
  std::vector<NodeTables> tables;
  std::map<std::tuple<int, int, int>, std::vector<int>> seq_memo;

  Solver(const Dendrogram& t, const DistanceMatrix& d) : tree(t), dm(d) {
    const int total = 2 * tree.leaves - 1;
    left_child.assign(static_cast<std::size_t>(total), -1);
    right_child.assign(static_cast<std::size_t>(total), -1);
    for (std::size_t m = 0; m < tree.merges.size(); ++m) {
      const int id = tree.leaves + static_cast<int>(m);
      left_child[static_cast<std::size_t>(id)] = tree.merges[m].left;
      right_child[static_cast<std::size_t>(id)] = tree.merges[m].right;
    }
    tables.resize(static_cast<std::size_t>(total));
    for (int v = 0; v < total; ++v) fill_tables(v);
  }

  void fill_tables(int v) {
    NodeTables& nt = tables[static_cast<std::size_t>(v)];
    if (left_child[static_cast<std::size_t>(v)] < 0) {
      nt.leaves = {v};
      nt.best[{v, v}] = 0.0;
      return;
    }
    const NodeTables& a = tables[static_cast<std::size_t>(left_child[static_cast<std::size_t>(v)])];
    const NodeTables& b = tables[static_cast<std::size_t>(right_child[static_cast<std::size_t>(v)])];
    nt.leaves = a.leaves;
    nt.leaves.insert(nt.leaves.end(), b.leaves.begin(), b.leaves.end());
    combine(a, b, nt);
    combine(b, a, nt);
  }

  // Orders X's leaves first, then Y's: state (l in X, r in Y).
  void combine(const NodeTables& x, const NodeTables& y, NodeTables& out) {
    for (int l : x.leaves) {
      // T[m2] = min over m1 of cost(X: l..m1) + d(m1, m2)
      std::map<int, double> t;
      for (int m2 : y.leaves) {
        double best = std::numeric_limits<double>::infinity();
        for (int m1 : x.leaves) {
          auto it = x.best.find({l, m1});
          if (it == x.best.end()) continue;
          const double c = it->second + dm.at(m1, m2);
          if (c < best) best = c;
        }
        t[m2] = best;
      }
      for (int r : y.leaves) {
        double best = std::numeric_limits<double>::infinity();
        for (int m2 : y.leaves) {
          auto it = y.best.find({m2, r});
          if (it == y.best.end()) continue;
          const double c = t[m2] + it->second;
          if (c < best) best = c;
        }
        auto [it, inserted] = out.best.insert({{l, r}, best});
        if (!inserted && best < it->second) it->second = best;
      }
    }
  }

  // Lexicographically smallest sequence realizing best[(l, r)] at node v.
  std::vector<int> sequence(int v, int l, int r) {
    const auto key = std::make_tuple(v, l, r);
    auto memo = seq_memo.find(key);
    if (memo != seq_memo.end()) return memo->second;
    const NodeTables& nt = tables[static_cast<std::size_t>(v)];
    if (left_child[static_cast<std::size_t>(v)] < 0) {
      return seq_memo[key] = {v};
    }
    const double target = nt.best.at({l, r});
    std::vector<int> best_seq;
    for (int flip = 0; flip < 2; ++flip) {
      const int xi = flip ? right_child[static_cast<std::size_t>(v)]
                          : left_child[static_cast<std::size_t>(v)];
      const int yi = flip ? left_child[static_cast<std::size_t>(v)]
                          : right_child[static_cast<std::size_t>(v)];
      const NodeTables& x = tables[static_cast<std::size_t>(xi)];
      const NodeTables& y = tables[static_cast<std::size_t>(yi)];
      auto lx = x.best.end();
      if (std::find(x.leaves.begin(), x.leaves.end(), l) == x.leaves.end()) continue;
      if (std::find(y.leaves.begin(), y.leaves.end(), r) == y.leaves.end()) continue;
      (void)lx;
      for (int m1 : x.leaves) {
        auto itx = x.best.find({l, m1});
        if (itx == x.best.end()) continue;
        for (int m2 : y.leaves) {
          auto ity = y.best.find({m2, r});
          if (ity == y.best.end()) continue;
          if ((itx->second + dm.at(m1, m2)) + ity->second != target) continue;
          std::vector<int> cand = sequence(xi, l, m1);
          const std::vector<int> tail = sequence(yi, m2, r);
          cand.insert(cand.end(), tail.begin(), tail.end());
          if (best_seq.empty() || cand < best_seq) best_seq = std::move(cand);
        }
      }
    }
    if (best_seq.empty()) {
      throw Error(ErrorCode::TreeMatrixMismatch, "leaf order reconstruction failed");
    }
    return seq_memo[key] = best_seq;
  }
};

}  // namespace

std::vector<int> optimal_leaf_order(const Dendrogram& tree, const DistanceMatrix& dm) {
  if (tree.leaves != dm.n) {
    throw Error(ErrorCode::TreeMatrixMismatch,
                "tree has " + std::to_string(tree.leaves) + " leaves but matrix is " +
                    std::to_string(dm.n) + " wide");
  }
  if (static_cast<int>(tree.merges.size()) != tree.leaves - 1) {
    throw Error(ErrorCode::TreeMatrixMismatch, "dendrogram must have exactly k-1 merges");
  }
  if (tree.leaves == 1) return {0};
  Solver solver(tree, dm);
  const int root = 2 * tree.leaves - 2;
  const NodeTables& nt = solver.tables[static_cast<std::size_t>(root)];
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [ends, cost] : nt.best) best = std::min(best, cost);
  std::vector<int> best_seq;
  for (const auto& [ends, cost] : nt.best) {
    if (cost != best) continue;
    std::vector<int> cand = solver.sequence(root, ends.first, ends.second);
    if (best_seq.empty() || cand < best_seq) best_seq = std::move(cand);
  }
  return best_seq;
}

double leaf_order_cost(const std::vector<int>& order, const DistanceMatrix& dm) {
  double cost = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    cost += dm.at(order[i], order[i + 1]);
  }
  return cost;
}

}  // namespace rxnemb::cluster
