#include "rxnemb/pretrain/corpus.hpp"

#include <fstream>

#include <json.hpp>

#include "rxnemb/chem/canonical.hpp"
#include "rxnemb/chem/fragment.hpp"
#include "rxnemb/chem/smiles.hpp"
#include "rxnemb/common/error.hpp"
#include "rxnemb/common/rng.hpp"

namespace rxnemb::pretrain {

using nlohmann::json;

namespace {

// Product components that have at least one acyclic single bond, i.e. can
// participate in a fragment exchange.
std::vector<int> cuttable_components(const chem::Reaction& rxn) {
  std::vector<int> out;
  for (std::size_t c = 0; c < rxn.product_components.size(); ++c) {
    if (!chem::cuttable_bonds(rxn.product_components[c]).empty()) {
      out.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace

std::vector<LabeledReaction> make_fictitious_corpus(const std::vector<chem::Reaction>& real,
                                                    std::uint64_t seed,
                                                    std::vector<std::string>* warnings) {
  if (real.size() < 2) {
    throw Error(ErrorCode::EmptySet, "fragment exchange needs at least 2 real reactions");
  }
  const int n = static_cast<int>(real.size());
  std::vector<LabeledReaction> out;
  out.reserve(real.size() * 2);
  for (const chem::Reaction& rxn : real) {
    out.push_back({rxn, true, rxn.id});
  }

  for (int i = 0; i < n; ++i) {
    Rng rng(seed ^ static_cast<std::uint64_t>(i));
    const chem::Reaction& mine = real[static_cast<std::size_t>(i)];
    const std::vector<int> my_comps = cuttable_components(mine);
    if (my_comps.empty()) {
      if (warnings) {
        warnings->push_back("reaction " + mine.id +
                            ": NoCuttableBond in any product component; no fictitious entry");
      }
      continue;
    }

    bool made = false;
    for (int attempt = 0; attempt < 10 && !made; ++attempt) {
      int partner = rng.index(n - 1);
      if (partner >= i) ++partner;
      const chem::Reaction& other = real[static_cast<std::size_t>(partner)];
      const std::vector<int> other_comps = cuttable_components(other);
      if (other_comps.empty()) continue;

      const int mc = my_comps[static_cast<std::size_t>(rng.index(static_cast<int>(my_comps.size())))];
      const int oc =
          other_comps[static_cast<std::size_t>(rng.index(static_cast<int>(other_comps.size())))];
      const chem::MolecularGraph& my_product =
          mine.product_components[static_cast<std::size_t>(mc)];
      const chem::MolecularGraph& other_product =
          other.product_components[static_cast<std::size_t>(oc)];

      const auto my_bonds = chem::cuttable_bonds(my_product);
      const auto other_bonds = chem::cuttable_bonds(other_product);
      const int mb = my_bonds[static_cast<std::size_t>(rng.index(static_cast<int>(my_bonds.size())))];
      const int ob =
          other_bonds[static_cast<std::size_t>(rng.index(static_cast<int>(other_bonds.size())))];

      const chem::BondCut my_cut = chem::cut_acyclic_bond(my_product, mb);
      const chem::BondCut other_cut = chem::cut_acyclic_bond(other_product, ob);
      chem::MolecularGraph swapped = chem::exchange_fragments(my_cut, other_cut).first;
      if (chem::isomorphic(swapped, my_product)) continue;  // resample

      LabeledReaction fict;
      fict.reaction = mine;
      fict.reaction.id = mine.id + "-fict";
      fict.reaction.product_components[static_cast<std::size_t>(mc)] = std::move(swapped);
      fict.is_real = false;
      fict.source_id = mine.id + "|" + other.id;
      out.push_back(std::move(fict));
      made = true;
    }
    if (!made && warnings) {
      warnings->push_back("reaction " + mine.id +
                          ": fictitious product matched the real one 10 times; entry dropped");
    }
  }
  return out;
}

std::vector<ReactionRecord> read_reaction_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::DataError, "cannot open " + path);
  std::vector<ReactionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::DataError,
                  path + ":" + std::to_string(lineno) + ": bad JSON (" + e.what() + ")");
    }
    ReactionRecord rec;
    rec.id = j.value("id", "line-" + std::to_string(lineno));
    if (!j.contains("rxn_smiles")) {
      throw Error(ErrorCode::DataError,
                  path + ":" + std::to_string(lineno) + ": missing rxn_smiles");
    }
    rec.rxn_smiles = j.at("rxn_smiles").get<std::string>();
    if (j.contains("is_real")) rec.is_real = j.at("is_real").get<bool>();
    if (j.contains("label")) rec.label = j.at("label").get<std::string>();
    out.push_back(std::move(rec));
  }
  return out;
}

void write_corpus_jsonl(const std::string& path, const std::vector<LabeledReaction>& corpus) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::DataError, "cannot open " + path + " for writing");
  for (const LabeledReaction& entry : corpus) {
    json j = {{"id", entry.reaction.id},
              {"rxn_smiles", chem::write_reaction_smiles(entry.reaction)},
              {"is_real", entry.is_real}};
    if (entry.reaction.class_label) j["label"] = *entry.reaction.class_label;
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::DataError, "failed writing " + path);
}

}  // namespace rxnemb::pretrain
