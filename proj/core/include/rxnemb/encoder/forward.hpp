#pragma once

#include <cstdint>
#include <vector>

#include "rxnemb/ad/tape.hpp"
#include "rxnemb/chem/molecule.hpp"
#include "rxnemb/encoder/model.hpp"

namespace rxnemb::encoder {

// Per-atom input features: element one-hot (11) | degree one-hot 0-5 (6) |
// charge one-hot -2..+2 (5) | aromatic flag (1) | explicit-H one-hot 0-4 (5).
template <typename T>
ad::Tensor<T> featurize_atoms(const chem::MolecularGraph& graph);

// Symmetric-normalized adjacency D^-1/2 (A+I) D^-1/2; bond orders ignored.
template <typename T>
ad::Tensor<T> normalize_adjacency(const chem::MolecularGraph& graph);

// Attention recorded during a forward pass, for the viz module.
struct MoleculePooling {
  std::vector<float> atom_weights;  // softmax over atoms, sums to 1
};

struct HeadMatrix {
  int n = 0;
  std::vector<float> values;  // n x n row-major, rows sum to 1 over live keys
};

struct SideAttention {
  std::vector<MoleculePooling> molecules;
  std::vector<std::vector<HeadMatrix>> transformer;  // [layer][head]
  std::vector<std::uint8_t> row_mask;                // live rows of the padded set
};

struct AttentionBundle {
  SideAttention reactants;
  SideAttention products;
};

struct ReactionEmbedding {
  std::vector<float> values;
};

// Model parameters registered on a tape, wired up by name.
template <typename T>
struct BoundModel {
  EncoderConfig config;
  std::vector<typename ad::Tape<T>::Var> vars;  // aligned with ParamStore entries
  const ParamStore<T>* store = nullptr;

  typename ad::Tape<T>::Var var(const std::string& name) const;
};

template <typename T>
BoundModel<T> bind_model(ad::Tape<T>& tape, const ParamStore<T>& store,
                         const EncoderConfig& config);

template <typename T>
struct ReactionVars {
  typename ad::Tape<T>::Var embedding;  // 1 x emb_dim
  typename ad::Tape<T>::Var logit;      // 1 x 1
};

// Full pipeline on an existing tape: featurize -> GCN x L -> jumping
// knowledge -> attention pooling per molecule -> pad -> Transformer x L ->
// masked-mean side pooling, per side with its own parameter set, then the
// diff/concat interaction head and the real/fictitious classifier logit.
// pad_to = -1 pads each side to its component count (outputs are identical
// for any larger pad width; see tests). attn may be null.
template <typename T>
ReactionVars<T> encode_reaction_on_tape(ad::Tape<T>& tape, const BoundModel<T>& model,
                                        const chem::Reaction& rxn, int pad_to = -1,
                                        AttentionBundle* attn = nullptr);

// Inference conveniences on a private tape.
std::pair<ReactionEmbedding, AttentionBundle> embed_reaction(const Model& model,
                                                             const chem::Reaction& rxn);

// Probability that `rxn`'s bond changes look real, via the pretrained head.
float classify_real(const Model& model, const ReactionEmbedding& embedding);

extern template ad::Tensor<float> featurize_atoms<float>(const chem::MolecularGraph&);
extern template ad::Tensor<double> featurize_atoms<double>(const chem::MolecularGraph&);
extern template ad::Tensor<float> normalize_adjacency<float>(const chem::MolecularGraph&);
extern template ad::Tensor<double> normalize_adjacency<double>(const chem::MolecularGraph&);
extern template struct BoundModel<float>;
extern template struct BoundModel<double>;
extern template BoundModel<float> bind_model<float>(ad::Tape<float>&, const ParamStore<float>&,
                                                    const EncoderConfig&);
extern template BoundModel<double> bind_model<double>(ad::Tape<double>&,
                                                      const ParamStore<double>&,
                                                      const EncoderConfig&);
extern template ReactionVars<float> encode_reaction_on_tape<float>(ad::Tape<float>&,
                                                                   const BoundModel<float>&,
                                                                   const chem::Reaction&, int,
                                                                   AttentionBundle*);
extern template ReactionVars<double> encode_reaction_on_tape<double>(ad::Tape<double>&,
                                                                     const BoundModel<double>&,
                                                                     const chem::Reaction&, int,
                                                                     AttentionBundle*);

}  // namespace rxnemb::encoder
