#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rxnemb::chem {

// Element vocabulary used for featurization. Anything outside the organic
// subset + halogens collapses to Other; the original symbol is kept so
// SMILES can be written back faithfully.
enum class Element : std::uint8_t {
  B, C, N, O, P, S, F, Cl, Br, I, Other
};

constexpr int kElementVocabSize = 11;

Element classify_element(const std::string& symbol);
const char* element_symbol(Element e);

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

// Contribution of a bond to an atom's valence; aromatic counts 1.5.
double bond_valence(BondOrder order);

struct Atom {
  Element element = Element::C;
  std::string symbol;        // as written, e.g. "Na" for an Other atom
  int formal_charge = 0;
  bool aromatic = false;
  int explicit_h = 0;
  std::optional<int> atom_map;  // parsed, never used downstream
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
};

// Undirected molecular graph: each bond stored once, no self loops.
struct MolecularGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  int bond_count() const { return static_cast<int>(bonds.size()); }

  // Neighbor lists (atom index -> adjacent atom indices), in bond order.
  std::vector<std::vector<int>> adjacency() const;
  int degree(int atom) const;
};

struct Reaction {
  std::string id;
  std::vector<MolecularGraph> reactant_components;  // reactants + solvents + additives
  std::vector<MolecularGraph> product_components;
  std::optional<std::string> class_label;
};

}  // namespace rxnemb::chem
