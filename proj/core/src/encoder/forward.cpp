#include "rxnemb/encoder/forward.hpp"

#include <algorithm>
#include <cmath>

namespace rxnemb::encoder {

template <typename T>
ad::Tensor<T> featurize_atoms(const chem::MolecularGraph& graph) {
  const int n = graph.atom_count();
  const int dim = EncoderConfig::kAtomFeatureDim;
  ad::Tensor<T> out = ad::Tensor<T>::zeros({n, dim});
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const chem::Bond& b : graph.bonds) {
    degree[static_cast<std::size_t>(b.a)]++;
    degree[static_cast<std::size_t>(b.b)]++;
  }
  for (int i = 0; i < n; ++i) {
    const chem::Atom& atom = graph.atoms[static_cast<std::size_t>(i)];
    int off = 0;
    out.at(i, off + static_cast<int>(atom.element)) = T(1);
    off += chem::kElementVocabSize;  // 11
    out.at(i, off + std::min(degree[static_cast<std::size_t>(i)], 5)) = T(1);
    off += 6;
    out.at(i, off + std::clamp(atom.formal_charge, -2, 2) + 2) = T(1);
    off += 5;
    if (atom.aromatic) out.at(i, off) = T(1);
    off += 1;
    out.at(i, off + std::min(atom.explicit_h, 4)) = T(1);
  }
  return out;
}

template <typename T>
ad::Tensor<T> normalize_adjacency(const chem::MolecularGraph& graph) {
  const int n = graph.atom_count();
  ad::Tensor<T> a = ad::Tensor<T>::zeros({n, n});
  for (int i = 0; i < n; ++i) a.at(i, i) = T(1);
  for (const chem::Bond& b : graph.bonds) {
    a.at(b.a, b.b) = T(1);
    a.at(b.b, b.a) = T(1);
  }
  std::vector<T> inv_sqrt_deg(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    T deg = T(0);
    for (int j = 0; j < n; ++j) deg += a.at(i, j);
    inv_sqrt_deg[static_cast<std::size_t>(i)] = T(1) / std::sqrt(deg);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a.at(i, j) *= inv_sqrt_deg[static_cast<std::size_t>(i)] *
                    inv_sqrt_deg[static_cast<std::size_t>(j)];
    }
  }
  return a;
}

template <typename T>
typename ad::Tape<T>::Var BoundModel<T>::var(const std::string& name) const {
  const int i = store->index_of(name);
  if (i < 0) throw Error(ErrorCode::ConfigError, "model has no parameter " + name);
  return vars[static_cast<std::size_t>(i)];
}

template <typename T>
BoundModel<T> bind_model(ad::Tape<T>& tape, const ParamStore<T>& store,
                         const EncoderConfig& config) {
  BoundModel<T> bound;
  bound.config = config;
  bound.store = &store;
  bound.vars.reserve(store.size());
  for (const auto& [name, tensor] : store.entries()) {
    bound.vars.push_back(tape.param(tensor, "param"));
  }
  return bound;
}

namespace {

template <typename T>
using Var = typename ad::Tape<T>::Var;

// GCN + jumping knowledge + gated attention pooling for one molecule.
// Returns the 1 x d_model molecule vector; fills atom pooling weights.
template <typename T>
Var<T> encode_molecule(ad::Tape<T>& tape, const BoundModel<T>& model, const std::string& side,
                       const chem::MolecularGraph& graph,
                       std::vector<float>* pool_weights_out) {
  const EncoderConfig& cfg = model.config;
  Var<T> h = tape.constant(featurize_atoms<T>(graph), "atom_features");
  Var<T> ahat = tape.constant(normalize_adjacency<T>(graph), "adjacency");

  std::vector<Var<T>> layer_outputs;
  layer_outputs.reserve(static_cast<std::size_t>(cfg.gnn_layers));
  for (int l = 0; l < cfg.gnn_layers; ++l) {
    const std::string p = side + ".gcn." + std::to_string(l) + ".";
    Var<T> mixed = tape.matmul(ahat, h);
    Var<T> lin = tape.add_row(tape.matmul(mixed, model.var(p + "w")), model.var(p + "b"));
    h = tape.relu(lin);
    layer_outputs.push_back(h);
  }

  Var<T> nodes;
  if (cfg.jk_mode == JkMode::ConcatProject) {
    Var<T> cat = tape.concat_cols(layer_outputs);
    nodes = tape.add_row(tape.matmul(cat, model.var(side + ".jk.w")),
                         model.var(side + ".jk.b"));
  } else {
    nodes = layer_outputs.back();
  }

  // Gated pooling: scalar score per atom, softmax over atoms, weighted sum
  // of value-projected rows.
  Var<T> scores = tape.add_row(tape.matmul(nodes, model.var(side + ".pool.gate_w")),
                               model.var(side + ".pool.gate_b"));
  Var<T> weights = tape.softmax_rows(tape.transpose(scores));  // 1 x n
  Var<T> values = tape.matmul(nodes, model.var(side + ".pool.val_w"));
  Var<T> mol_vec = tape.matmul(weights, values);  // 1 x d_model
  if (pool_weights_out) {
    const ad::Tensor<T>& w = tape.value(weights);
    pool_weights_out->assign(w.data.begin(), w.data.end());
  }
  return mol_vec;
}

// One pre-norm Transformer block over the padded molecule set.
template <typename T>
Var<T> transformer_layer(ad::Tape<T>& tape, const BoundModel<T>& model, const std::string& p,
                         Var<T> x, const ad::Mask& row_mask,
                         std::vector<HeadMatrix>* attn_out) {
  const EncoderConfig& cfg = model.config;
  const int rows = tape.value(x).rows();
  const int dh = cfg.head_dim();

  Var<T> normed = tape.layer_norm(x, model.var(p + "ln1.g"), model.var(p + "ln1.b"));
  Var<T> q = tape.add_row(tape.matmul(normed, model.var(p + "attn.wq")), model.var(p + "attn.bq"));
  Var<T> k = tape.add_row(tape.matmul(normed, model.var(p + "attn.wk")), model.var(p + "attn.bk"));
  Var<T> v = tape.add_row(tape.matmul(normed, model.var(p + "attn.wv")), model.var(p + "attn.bv"));

  // Key mask: every query row keeps only live key columns.
  ad::Mask key_mask(static_cast<std::size_t>(rows) * static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < rows; ++j) {
      key_mask[static_cast<std::size_t>(i) * static_cast<std::size_t>(rows) +
               static_cast<std::size_t>(j)] = row_mask[static_cast<std::size_t>(j)];
    }
  }

  std::vector<Var<T>> head_outputs;
  head_outputs.reserve(static_cast<std::size_t>(cfg.tf_heads));
  for (int hidx = 0; hidx < cfg.tf_heads; ++hidx) {
    Var<T> qh = tape.slice_cols(q, hidx * dh, dh);
    Var<T> kh = tape.slice_cols(k, hidx * dh, dh);
    Var<T> vh = tape.slice_cols(v, hidx * dh, dh);
    Var<T> logits = tape.scale(tape.matmul(qh, tape.transpose(kh)),
                               static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh))));
    Var<T> attn = tape.softmax_rows(logits, key_mask);
    if (attn_out) {
      const ad::Tensor<T>& a = tape.value(attn);
      HeadMatrix hm;
      hm.n = rows;
      hm.values.assign(a.data.begin(), a.data.end());
      attn_out->push_back(std::move(hm));
    }
    head_outputs.push_back(tape.matmul(attn, vh));
  }
  Var<T> mha = tape.add_row(tape.matmul(tape.concat_cols(head_outputs), model.var(p + "attn.wo")),
                            model.var(p + "attn.bo"));
  x = tape.add(x, mha);

  Var<T> normed2 = tape.layer_norm(x, model.var(p + "ln2.g"), model.var(p + "ln2.b"));
  Var<T> hidden = tape.relu(
      tape.add_row(tape.matmul(normed2, model.var(p + "ffn.w1")), model.var(p + "ffn.b1")));
  Var<T> ffn = tape.add_row(tape.matmul(hidden, model.var(p + "ffn.w2")), model.var(p + "ffn.b2"));
  return tape.add(x, ffn);
}

template <typename T>
Var<T> encode_side(ad::Tape<T>& tape, const BoundModel<T>& model, const std::string& side,
                   const std::vector<chem::MolecularGraph>& components, int pad_to,
                   SideAttention* attn) {
  const EncoderConfig& cfg = model.config;
  const int count = static_cast<int>(components.size());
  if (count == 0) {
    throw Error(ErrorCode::AllMasked, side + " side has no components");
  }
  if (count > cfg.max_components) {
    throw Error(ErrorCode::TooManyComponents,
                side + " side has " + std::to_string(count) + " components (max " +
                    std::to_string(cfg.max_components) + ")");
  }
  if (pad_to < 0) pad_to = count;
  if (pad_to < count) {
    throw Error(ErrorCode::ShapeMismatch, "pad width below component count");
  }

  std::vector<Var<T>> mol_vecs;
  mol_vecs.reserve(static_cast<std::size_t>(count));
  for (const chem::MolecularGraph& graph : components) {
    std::vector<float> pool_weights;
    mol_vecs.push_back(encode_molecule(tape, model, side, graph,
                                       attn ? &pool_weights : nullptr));
    if (attn) attn->molecules.push_back({std::move(pool_weights)});
  }

  Var<T> x = tape.concat_rows(mol_vecs);
  if (pad_to > count) {
    Var<T> zeros = tape.constant(ad::Tensor<T>::zeros({pad_to - count, cfg.d_model}), "pad");
    x = tape.concat_rows({x, zeros});
  }
  ad::Mask row_mask(static_cast<std::size_t>(pad_to), 0);
  for (int i = 0; i < count; ++i) row_mask[static_cast<std::size_t>(i)] = 1;
  if (attn) attn->row_mask = row_mask;

  for (int l = 0; l < cfg.tf_layers; ++l) {
    std::vector<HeadMatrix>* layer_attn = nullptr;
    if (attn) {
      attn->transformer.emplace_back();
      layer_attn = &attn->transformer.back();
    }
    x = transformer_layer(tape, model, side + ".tf." + std::to_string(l) + ".", x, row_mask,
                          layer_attn);
  }
  return tape.mean_rows(x, row_mask);  // 1 x d_model
}

}  // namespace

template <typename T>
ReactionVars<T> encode_reaction_on_tape(ad::Tape<T>& tape, const BoundModel<T>& model,
                                        const chem::Reaction& rxn, int pad_to,
                                        AttentionBundle* attn) {
  Var<T> r = encode_side(tape, model, "reactant", rxn.reactant_components, pad_to,
                         attn ? &attn->reactants : nullptr);
  Var<T> p = encode_side(tape, model, "product", rxn.product_components, pad_to,
                         attn ? &attn->products : nullptr);
  Var<T> diff = tape.sub(p, r);
  Var<T> z = tape.concat_cols({r, p, diff});
  Var<T> h1 = tape.add_row(tape.matmul(z, model.var("inter.w1")), model.var("inter.b1"));
  Var<T> normed = tape.layer_norm(h1, model.var("inter.ln.g"), model.var("inter.ln.b"));
  Var<T> emb = tape.add_row(tape.matmul(normed, model.var("inter.w2")), model.var("inter.b2"));
  Var<T> logit = tape.add_row(tape.matmul(emb, model.var("cls.w")), model.var("cls.b"));
  return {emb, logit};
}

std::pair<ReactionEmbedding, AttentionBundle> embed_reaction(const Model& model,
                                                             const chem::Reaction& rxn) {
  ad::Tape<float> tape;
  BoundModel<float> bound = bind_model(tape, model.params, model.config);
  AttentionBundle bundle;
  ReactionVars<float> vars = encode_reaction_on_tape(tape, bound, rxn, -1, &bundle);
  const ad::Tensor<float>& emb = tape.value(vars.embedding);
  ReactionEmbedding out;
  out.values.assign(emb.data.begin(), emb.data.end());
  return {std::move(out), std::move(bundle)};
}

float classify_real(const Model& model, const ReactionEmbedding& embedding) {
  const ad::Tensor<float>& w = model.params.at("cls.w");
  const ad::Tensor<float>& b = model.params.at("cls.b");
  if (static_cast<int>(embedding.values.size()) != w.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "embedding length does not match classifier");
  }
  double z = static_cast<double>(b.data[0]);
  for (std::size_t i = 0; i < embedding.values.size(); ++i) {
    z += static_cast<double>(embedding.values[i]) * static_cast<double>(w.data[i]);
  }
  const double p = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return static_cast<float>(p);
}

template ad::Tensor<float> featurize_atoms<float>(const chem::MolecularGraph&);
template ad::Tensor<double> featurize_atoms<double>(const chem::MolecularGraph&);
template ad::Tensor<float> normalize_adjacency<float>(const chem::MolecularGraph&);
template ad::Tensor<double> normalize_adjacency<double>(const chem::MolecularGraph&);
template struct BoundModel<float>;
template struct BoundModel<double>;
template BoundModel<float> bind_model<float>(ad::Tape<float>&, const ParamStore<float>&,
                                             const EncoderConfig&);
template BoundModel<double> bind_model<double>(ad::Tape<double>&, const ParamStore<double>&,
                                               const EncoderConfig&);
template ReactionVars<float> encode_reaction_on_tape<float>(ad::Tape<float>&,
                                                            const BoundModel<float>&,
                                                            const chem::Reaction&, int,
                                                            AttentionBundle*);
template ReactionVars<double> encode_reaction_on_tape<double>(ad::Tape<double>&,
                                                              const BoundModel<double>&,
                                                              const chem::Reaction&, int,
                                                              AttentionBundle*);

}  // namespace rxnemb::encoder
