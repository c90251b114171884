#pragma once

#include <string>

#include "rxnemb/chem/molecule.hpp"

namespace rxnemb::chem {

// Canonical form of a molecular graph: atoms are canonically reordered by
// color refinement with individualization, then features + edges are
// serialized. Two graphs are isomorphic (respecting element symbol, charge,
// aromaticity, explicit H and bond orders) iff their codes are equal.
// Intended for graphs up to ~64 atoms.
std::string canonical_code(const MolecularGraph& graph);

bool isomorphic(const MolecularGraph& a, const MolecularGraph& b);

}  // namespace rxnemb::chem
