#include "rxnemb/chem/canonical.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace rxnemb::chem {

namespace {

using Colors = std::vector<int>;

struct EdgeRef {
  int other;
  BondOrder order;
};

// One round of color refinement; returns true if the partition changed.
// New color ids follow the sorted order of (old color, neighbor multiset)
// signatures, which keeps them isomorphism-invariant.
bool refine_once(const std::vector<std::vector<EdgeRef>>& adj, Colors& colors) {
  const std::size_t n = colors.size();
  std::vector<std::vector<long long>> sig(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<long long> neigh;
    neigh.reserve(adj[v].size());
    for (const EdgeRef& e : adj[v]) {
      neigh.push_back(static_cast<long long>(colors[static_cast<std::size_t>(e.other)]) * 8 +
                      static_cast<long long>(e.order));
    }
    std::sort(neigh.begin(), neigh.end());
    sig[v].push_back(colors[v]);
    sig[v].insert(sig[v].end(), neigh.begin(), neigh.end());
  }
  std::map<std::vector<long long>, int> order;
  for (const auto& s : sig) order.emplace(s, 0);
  int next = 0;
  for (auto& [key, id] : order) id = next++;
  bool changed = false;
  for (std::size_t v = 0; v < n; ++v) {
    const int c = order[sig[v]];
    if (c != colors[v]) changed = true;
    colors[v] = c;
  }
  return changed;
}

void refine(const std::vector<std::vector<EdgeRef>>& adj, Colors& colors) {
  while (refine_once(adj, colors)) {
  }
}

int first_non_singleton(const Colors& colors) {
  std::map<int, int> counts;
  for (int c : colors) counts[c]++;
  for (const auto& [c, cnt] : counts) {
    if (cnt > 1) return c;
  }
  return -1;
}

std::string code_from_discrete(const MolecularGraph& g, const Colors& colors) {
  const std::size_t n = colors.size();
  std::vector<int> atom_at(n);  // rank -> atom
  for (std::size_t v = 0; v < n; ++v) atom_at[static_cast<std::size_t>(colors[v])] = static_cast<int>(v);
  std::ostringstream out;
  for (std::size_t r = 0; r < n; ++r) {
    const Atom& a = g.atoms[static_cast<std::size_t>(atom_at[r])];
    out << a.symbol << ',' << a.formal_charge << ',' << (a.aromatic ? 1 : 0) << ','
        << a.explicit_h << ';';
  }
  std::vector<std::tuple<int, int, int>> edges;
  edges.reserve(g.bonds.size());
  for (const Bond& b : g.bonds) {
    int ra = colors[static_cast<std::size_t>(b.a)];
    int rb = colors[static_cast<std::size_t>(b.b)];
    if (ra > rb) std::swap(ra, rb);
    edges.emplace_back(ra, rb, static_cast<int>(b.order));
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [ra, rb, o] : edges) out << ra << '-' << rb << ':' << o << ';';
  return out.str();
}

void search(const MolecularGraph& g, const std::vector<std::vector<EdgeRef>>& adj,
            Colors colors, std::string& best) {
  refine(adj, colors);
  const int cell = first_non_singleton(colors);
  if (cell < 0) {
    std::string code = code_from_discrete(g, colors);
    if (best.empty() || code < best) best = std::move(code);
    return;
  }
  const int fresh = static_cast<int>(colors.size());
  for (std::size_t v = 0; v < colors.size(); ++v) {
    if (colors[v] != cell) continue;
    Colors branched = colors;
    branched[v] = fresh;
    search(g, adj, std::move(branched), best);
  }
}

}  // namespace

std::string canonical_code(const MolecularGraph& graph) {
  const std::size_t n = graph.atoms.size();
  std::vector<std::vector<EdgeRef>> adj(n);
  for (const Bond& b : graph.bonds) {
    adj[static_cast<std::size_t>(b.a)].push_back({b.b, b.order});
    adj[static_cast<std::size_t>(b.b)].push_back({b.a, b.order});
  }
  // Initial colors from the atom feature tuple.
  std::map<std::tuple<std::string, int, bool, int>, int> classes;
  for (const Atom& a : graph.atoms) {
    classes.emplace(std::make_tuple(a.symbol, a.formal_charge, a.aromatic, a.explicit_h), 0);
  }
  int next = 0;
  for (auto& [key, id] : classes) id = next++;
  Colors colors(n);
  for (std::size_t v = 0; v < n; ++v) {
    const Atom& a = graph.atoms[v];
    colors[v] = classes[std::make_tuple(a.symbol, a.formal_charge, a.aromatic, a.explicit_h)];
  }
  std::string best;
  search(graph, adj, std::move(colors), best);
  return "n" + std::to_string(n) + "|" + best;
}

bool isomorphic(const MolecularGraph& a, const MolecularGraph& b) {
  if (a.atoms.size() != b.atoms.size() || a.bonds.size() != b.bonds.size()) return false;
  return canonical_code(a) == canonical_code(b);
}

}  // namespace rxnemb::chem
