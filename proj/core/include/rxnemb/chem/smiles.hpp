#pragma once

#include <string>
#include <vector>

#include "rxnemb/chem/molecule.hpp"

namespace rxnemb::chem {

// Parses a single-component SMILES over the supported grammar: organic
// subset atoms, bracket atoms (isotope, charge, H count, atom map, @/@@),
// ring closures incl. %nn, branches, bond symbols - = # : / \.
// Stereo markers are accepted and discarded; implicit hydrogens are
// resolved against the standard valence table (B3 C4 N3 O2 P3/5 S2/4/6,
// halogens 1). Throws ParseError with a byte offset on malformed input.
MolecularGraph parse_molecule(const std::string& smiles);

struct WriteResult {
  std::string smiles;
  // visit_order[k] = original atom index written at position k; the
  // re-parsed graph's atom k corresponds to this input atom.
  std::vector<int> visit_order;
};

// Deterministic depth-first serialization from atom 0. The output re-parses
// to a graph isomorphic to the input; write_smiles_traced also reports the
// atom relabeling so the round trip can be checked exactly.
WriteResult write_smiles_traced(const MolecularGraph& graph);
std::string write_smiles(const MolecularGraph& graph);

// Reaction SMILES: "A>>C" or "A>B>C" (agents merged into the reactant
// side); each side dot-separated components parsed independently.
Reaction parse_reaction(const std::string& rxn_smiles, const std::string& id);

std::string write_reaction_smiles(const Reaction& rxn);

}  // namespace rxnemb::chem
