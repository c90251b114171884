#pragma once

#include <utility>
#include <vector>

#include "rxnemb/chem/molecule.hpp"

namespace rxnemb::chem {

// Result of cutting an acyclic single bond: the two connected components
// and the attachment atom index inside each. Attachment atoms carry one
// extra explicit hydrogen so the fragments stay valence-consistent.
struct BondCut {
  MolecularGraph fragment_a;
  MolecularGraph fragment_b;
  int attach_a = 0;
  int attach_b = 0;
};

// Indices of bonds eligible for cut_acyclic_bond (single order, not in a cycle).
std::vector<int> cuttable_bonds(const MolecularGraph& graph);

BondCut cut_acyclic_bond(const MolecularGraph& graph, int bond_index);

// Swaps the halves of two cuts: (a1+b2, b1+a2), joining with a new single
// bond between the attachment atoms (whose explicit_h drops back by 1).
std::pair<MolecularGraph, MolecularGraph> exchange_fragments(const BondCut& a,
                                                             const BondCut& b);

}  // namespace rxnemb::chem
