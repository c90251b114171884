#include "rxnemb/chem/fragment.hpp"

#include <algorithm>

#include "rxnemb/common/error.hpp"

namespace rxnemb::chem {

namespace {

// True if endpoints stay connected when the bond is removed.
bool in_cycle(const MolecularGraph& graph, int bond_index) {
  const Bond& bond = graph.bonds[static_cast<std::size_t>(bond_index)];
  std::vector<bool> seen(graph.atoms.size(), false);
  std::vector<int> stack{bond.a};
  seen[static_cast<std::size_t>(bond.a)] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (std::size_t bi = 0; bi < graph.bonds.size(); ++bi) {
      if (static_cast<int>(bi) == bond_index) continue;
      const Bond& e = graph.bonds[bi];
      int v = -1;
      if (e.a == u) v = e.b;
      else if (e.b == u) v = e.a;
      else continue;
      if (v == bond.b) return true;
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

// Extracts the component reachable from `root` with the cut bond removed,
// preserving relative atom order.
MolecularGraph extract_component(const MolecularGraph& graph, int bond_index, int root,
                                 int* attach_out) {
  std::vector<bool> keep(graph.atoms.size(), false);
  std::vector<int> stack{root};
  keep[static_cast<std::size_t>(root)] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (std::size_t bi = 0; bi < graph.bonds.size(); ++bi) {
      if (static_cast<int>(bi) == bond_index) continue;
      const Bond& e = graph.bonds[bi];
      int v = -1;
      if (e.a == u) v = e.b;
      else if (e.b == u) v = e.a;
      else continue;
      if (!keep[static_cast<std::size_t>(v)]) {
        keep[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  std::vector<int> remap(graph.atoms.size(), -1);
  MolecularGraph out;
  for (std::size_t i = 0; i < graph.atoms.size(); ++i) {
    if (keep[i]) {
      remap[i] = out.atom_count();
      out.atoms.push_back(graph.atoms[i]);
    }
  }
  for (std::size_t bi = 0; bi < graph.bonds.size(); ++bi) {
    if (static_cast<int>(bi) == bond_index) continue;
    const Bond& e = graph.bonds[bi];
    if (keep[static_cast<std::size_t>(e.a)] && keep[static_cast<std::size_t>(e.b)]) {
      out.bonds.push_back({remap[static_cast<std::size_t>(e.a)],
                           remap[static_cast<std::size_t>(e.b)], e.order});
    }
  }
  *attach_out = remap[static_cast<std::size_t>(root)];
  return out;
}

// Appends `tail` to `head` and bonds head_attach to tail_attach with a new
// single bond, consuming one explicit H from each attachment atom.
MolecularGraph join_fragments(const MolecularGraph& head, int head_attach,
                              const MolecularGraph& tail, int tail_attach) {
  MolecularGraph out = head;
  const int offset = out.atom_count();
  out.atoms.insert(out.atoms.end(), tail.atoms.begin(), tail.atoms.end());
  for (const Bond& e : tail.bonds) {
    out.bonds.push_back({e.a + offset, e.b + offset, e.order});
  }
  Atom& left = out.atoms[static_cast<std::size_t>(head_attach)];
  Atom& right = out.atoms[static_cast<std::size_t>(tail_attach + offset)];
  if (left.explicit_h <= 0 || right.explicit_h <= 0) {
    throw Error(ErrorCode::ValenceUnderflow,
                "attachment atom has no hydrogen to replace with the new bond");
  }
  left.explicit_h -= 1;
  right.explicit_h -= 1;
  out.bonds.push_back({head_attach, tail_attach + offset, BondOrder::Single});
  return out;
}

}  // namespace

std::vector<int> cuttable_bonds(const MolecularGraph& graph) {
  std::vector<int> out;
  for (std::size_t bi = 0; bi < graph.bonds.size(); ++bi) {
    if (graph.bonds[bi].order != BondOrder::Single) continue;
    if (in_cycle(graph, static_cast<int>(bi))) continue;
    out.push_back(static_cast<int>(bi));
  }
  return out;
}

BondCut cut_acyclic_bond(const MolecularGraph& graph, int bond_index) {
  if (bond_index < 0 || bond_index >= graph.bond_count()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "bond index " + std::to_string(bond_index) + " of " +
                    std::to_string(graph.bond_count()));
  }
  const Bond& bond = graph.bonds[static_cast<std::size_t>(bond_index)];
  if (bond.order != BondOrder::Single) {
    throw Error(ErrorCode::NotSingleOrder, "only single bonds can be cut");
  }
  if (in_cycle(graph, bond_index)) {
    throw Error(ErrorCode::BondInCycle, "bond lies in a cycle");
  }
  BondCut cut;
  cut.fragment_a = extract_component(graph, bond_index, bond.a, &cut.attach_a);
  cut.fragment_b = extract_component(graph, bond_index, bond.b, &cut.attach_b);
  cut.fragment_a.atoms[static_cast<std::size_t>(cut.attach_a)].explicit_h += 1;
  cut.fragment_b.atoms[static_cast<std::size_t>(cut.attach_b)].explicit_h += 1;
  return cut;
}

std::pair<MolecularGraph, MolecularGraph> exchange_fragments(const BondCut& a,
                                                             const BondCut& b) {
  return {join_fragments(a.fragment_a, a.attach_a, b.fragment_b, b.attach_b),
          join_fragments(b.fragment_a, b.attach_a, a.fragment_b, a.attach_b)};
}

}  // namespace rxnemb::chem
