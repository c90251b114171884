#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rxnemb/chem/molecule.hpp"

namespace rxnemb::pretrain {

struct LabeledReaction {
  chem::Reaction reaction;
  bool is_real = true;
  // For fictitious entries: "<real id>|<partner id>" of the two source
  // reactions whose products were exchanged.
  std::string source_id;
};

// Desk-scale stand-in for a large reaction corpus: esterification,
// N-alkylation, benzylic bromination and amide formation over random
// alkyl/aryl substituents. Templates are assigned round-robin so the label
// distribution is uniform; substituents come from per-entry seeded streams.
std::vector<chem::Reaction> synth_templates(int n, std::uint64_t seed);

// All real entries plus one fictitious counterpart per real entry: the
// reactant side is kept and the product is replaced by a fragment-exchange
// recombination with a randomly chosen partner product. A fictitious
// product isomorphic to its real counterpart is resampled (<= 10 tries,
// then the entry is dropped); drop reasons are appended to `warnings`.
std::vector<LabeledReaction> make_fictitious_corpus(const std::vector<chem::Reaction>& real,
                                                    std::uint64_t seed,
                                                    std::vector<std::string>* warnings = nullptr);

// Corpus files are JSON lines: {"id", "rxn_smiles", "is_real", "label"?}.
struct ReactionRecord {
  std::string id;
  std::string rxn_smiles;
  std::optional<bool> is_real;
  std::optional<std::string> label;
};

std::vector<ReactionRecord> read_reaction_jsonl(const std::string& path);
void write_corpus_jsonl(const std::string& path, const std::vector<LabeledReaction>& corpus);

}  // namespace rxnemb::pretrain
