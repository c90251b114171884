#include <array>

#include "rxnemb/chem/smiles.hpp"
#include "rxnemb/common/rng.hpp"
#include "rxnemb/pretrain/corpus.hpp"

namespace rxnemb::pretrain {

namespace {

// Alkyl fragment attaching through its first (and last) written atom.
std::string random_alkyl(Rng& rng) {
  switch (rng.index(6)) {
    case 0: return "C";
    case 1: return "CC";
    case 2: return "CCC";
    case 3: return "CCCC";
    case 4: return "CC(C)C";
    default: return "CC(C)";
  }
}

// Aryl fragment attaching through the first ring atom.
std::string random_aryl(Rng& rng) {
  switch (rng.index(5)) {
    case 0: return "c1ccccc1";
    case 1: return "c1ccc(C)cc1";
    case 2: return "c1ccc(F)cc1";
    case 3: return "c1ccc(Cl)cc1";
    default: return "c1ccc(OC)cc1";
  }
}

std::string random_r(Rng& rng) {
  return rng.chance(0.3) ? random_aryl(rng) : random_alkyl(rng);
}

std::string maybe_solvent(Rng& rng) {
  if (!rng.chance(0.5)) return "";
  switch (rng.index(4)) {
    case 0: return "C1CCOC1";
    case 1: return "ClCCl";
    case 2: return "CC#N";
    default: return "CN(C)C=O";
  }
}

std::string join_reaction(std::vector<std::string> reactants, const std::string& product) {
  std::string out;
  for (std::size_t i = 0; i < reactants.size(); ++i) {
    if (reactants[i].empty()) continue;
    if (!out.empty()) out += '.';
    out += reactants[i];
  }
  return out + ">>" + product;
}

}  // namespace

std::vector<chem::Reaction> synth_templates(int n, std::uint64_t seed) {
  std::vector<chem::Reaction> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Rng rng(seed ^ static_cast<std::uint64_t>(i));
    std::string rxn_smiles;
    std::string label;
    switch (i % 4) {
      case 0: {  // acid + alcohol -> ester
        const std::string r1 = random_r(rng);
        const std::string r2 = random_alkyl(rng);
        rxn_smiles = join_reaction({r1 + "C(=O)O", r2 + "O", maybe_solvent(rng)},
                                   r1 + "C(=O)O" + r2);
        label = "esterification";
        break;
      }
      case 1: {  // alkyl bromide + amine -> secondary amine
        const std::string r1 = random_alkyl(rng);
        const std::string r2 = random_r(rng);
        rxn_smiles = join_reaction({r1 + "Br", r2 + "N", maybe_solvent(rng)}, r2 + "N" + r1);
        label = "n_alkylation";
        break;
      }
      case 2: {  // methylarene + NBS -> benzylic bromide
        const std::string ar = random_aryl(rng);
        rxn_smiles = join_reaction({"C" + ar, "O=C1CCC(=O)N1Br", maybe_solvent(rng)},
                                   "BrC" + ar);
        label = "bromination";
        break;
      }
      default: {  // acid + amine -> amide
        const std::string r1 = random_r(rng);
        const std::string r2 = random_alkyl(rng);
        rxn_smiles = join_reaction({r1 + "C(=O)O", r2 + "N", maybe_solvent(rng)},
                                   r1 + "C(=O)N" + r2);
        label = "amide";
        break;
      }
    }
    chem::Reaction rxn = chem::parse_reaction(rxn_smiles, "synth-" + std::to_string(i));
    rxn.class_label = label;
    out.push_back(std::move(rxn));
  }
  return out;
}

}  // namespace rxnemb::pretrain
