#include "rxnemb/chem/molecule.hpp"

namespace rxnemb::chem {

Element classify_element(const std::string& symbol) {
  if (symbol == "B") return Element::B;
  if (symbol == "C") return Element::C;
  if (symbol == "N") return Element::N;
  if (symbol == "O") return Element::O;
  if (symbol == "P") return Element::P;
  if (symbol == "S") return Element::S;
  if (symbol == "F") return Element::F;
  if (symbol == "Cl") return Element::Cl;
  if (symbol == "Br") return Element::Br;
  if (symbol == "I") return Element::I;
  return Element::Other;
}

const char* element_symbol(Element e) {
  switch (e) {
    case Element::B: return "B";
    case Element::C: return "C";
    case Element::N: return "N";
    case Element::O: return "O";
    case Element::P: return "P";
    case Element::S: return "S";
    case Element::F: return "F";
    case Element::Cl: return "Cl";
    case Element::Br: return "Br";
    case Element::I: return "I";
    case Element::Other: return "*";
  }
  return "*";
}

double bond_valence(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return 1.0;
    case BondOrder::Double: return 2.0;
    case BondOrder::Triple: return 3.0;
    case BondOrder::Aromatic: return 1.5;
  }
  return 1.0;
}

std::vector<std::vector<int>> MolecularGraph::adjacency() const {
  std::vector<std::vector<int>> adj(atoms.size());
  for (const Bond& bond : bonds) {
    adj[static_cast<std::size_t>(bond.a)].push_back(bond.b);
    adj[static_cast<std::size_t>(bond.b)].push_back(bond.a);
  }
  return adj;
}

int MolecularGraph::degree(int atom) const {
  int d = 0;
  for (const Bond& bond : bonds) {
    if (bond.a == atom || bond.b == atom) ++d;
  }
  return d;
}

}  // namespace rxnemb::chem
