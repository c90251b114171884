#include "rxnemb/encoder/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "rxnemb/common/rng.hpp"

namespace rxnemb::encoder {

using nlohmann::json;

template <typename T>
void ParamStore<T>::insert(std::string name, ad::Tensor<T> tensor) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                             [](const auto& e, const std::string& n) { return e.first < n; });
  if (it != entries_.end() && it->first == name) {
    throw Error(ErrorCode::ConfigError, "duplicate parameter name " + name);
  }
  entries_.insert(it, {std::move(name), std::move(tensor)});
}

template <typename T>
int ParamStore<T>::index_of(const std::string& name) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                             [](const auto& e, const std::string& n) { return e.first < n; });
  if (it == entries_.end() || it->first != name) return -1;
  return static_cast<int>(it - entries_.begin());
}

template <typename T>
ad::Tensor<T>& ParamStore<T>::at(const std::string& name) {
  const int i = index_of(name);
  if (i < 0) throw Error(ErrorCode::ConfigError, "unknown parameter " + name);
  return entries_[static_cast<std::size_t>(i)].second;
}

template <typename T>
const ad::Tensor<T>& ParamStore<T>::at(const std::string& name) const {
  const int i = index_of(name);
  if (i < 0) throw Error(ErrorCode::ConfigError, "unknown parameter " + name);
  return entries_[static_cast<std::size_t>(i)].second;
}

template class ParamStore<float>;
template class ParamStore<double>;

namespace {

ad::Tensor<float> glorot(Rng& rng, int rows, int cols) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<float> data(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (float& x : data) x = static_cast<float>(rng.uniform(-bound, bound));
  return ad::Tensor<float>::matrix(rows, cols, std::move(data));
}

ad::Tensor<float> zeros_row(int n) { return ad::Tensor<float>::zeros({1, n}); }

ad::Tensor<float> ones_row(int n) {
  return ad::Tensor<float>::matrix(1, n, std::vector<float>(static_cast<std::size_t>(n), 1.0f));
}

void init_side(ParamStore<float>& store, Rng& rng, const std::string& side,
               const EncoderConfig& cfg) {
  for (int l = 0; l < cfg.gnn_layers; ++l) {
    const int in = l == 0 ? EncoderConfig::kAtomFeatureDim : cfg.gnn_hidden;
    store.insert(side + ".gcn." + std::to_string(l) + ".w", glorot(rng, in, cfg.gnn_hidden));
    store.insert(side + ".gcn." + std::to_string(l) + ".b", zeros_row(cfg.gnn_hidden));
  }
  if (cfg.jk_mode == JkMode::ConcatProject) {
    store.insert(side + ".jk.w", glorot(rng, cfg.gnn_layers * cfg.gnn_hidden, cfg.gnn_hidden));
    store.insert(side + ".jk.b", zeros_row(cfg.gnn_hidden));
  }
  store.insert(side + ".pool.gate_w", glorot(rng, cfg.gnn_hidden, 1));
  store.insert(side + ".pool.gate_b", zeros_row(1));
  store.insert(side + ".pool.val_w", glorot(rng, cfg.gnn_hidden, cfg.d_model));
  for (int l = 0; l < cfg.tf_layers; ++l) {
    const std::string p = side + ".tf." + std::to_string(l) + ".";
    store.insert(p + "ln1.g", ones_row(cfg.d_model));
    store.insert(p + "ln1.b", zeros_row(cfg.d_model));
    for (const char* w : {"wq", "wk", "wv", "wo"}) {
      store.insert(p + "attn." + w, glorot(rng, cfg.d_model, cfg.d_model));
    }
    for (const char* b : {"bq", "bk", "bv", "bo"}) {
      store.insert(p + "attn." + b, zeros_row(cfg.d_model));
    }
    store.insert(p + "ln2.g", ones_row(cfg.d_model));
    store.insert(p + "ln2.b", zeros_row(cfg.d_model));
    store.insert(p + "ffn.w1", glorot(rng, cfg.d_model, cfg.ffn_dim));
    store.insert(p + "ffn.b1", zeros_row(cfg.ffn_dim));
    store.insert(p + "ffn.w2", glorot(rng, cfg.ffn_dim, cfg.d_model));
    store.insert(p + "ffn.b2", zeros_row(cfg.d_model));
  }
}

json config_to_json(const EncoderConfig& cfg) {
  return json{{"gnn_hidden", cfg.gnn_hidden},
              {"gnn_layers", cfg.gnn_layers},
              {"jk_mode", jk_mode_name(cfg.jk_mode)},
              {"d_model", cfg.d_model},
              {"tf_layers", cfg.tf_layers},
              {"tf_heads", cfg.tf_heads},
              {"ffn_dim", cfg.ffn_dim},
              {"emb_dim", cfg.emb_dim},
              {"max_components", cfg.max_components}};
}

EncoderConfig config_from_json(const json& j) {
  EncoderConfig cfg;
  cfg.gnn_hidden = j.at("gnn_hidden").get<int>();
  cfg.gnn_layers = j.at("gnn_layers").get<int>();
  cfg.jk_mode = jk_mode_from_name(j.at("jk_mode").get<std::string>());
  cfg.d_model = j.at("d_model").get<int>();
  cfg.tf_layers = j.at("tf_layers").get<int>();
  cfg.tf_heads = j.at("tf_heads").get<int>();
  cfg.ffn_dim = j.at("ffn_dim").get<int>();
  cfg.emb_dim = j.at("emb_dim").get<int>();
  cfg.max_components = j.at("max_components").get<int>();
  cfg.validate();
  return cfg;
}

}  // namespace

const char* jk_mode_name(JkMode mode) {
  return mode == JkMode::ConcatProject ? "concat_project" : "last";
}

JkMode jk_mode_from_name(const std::string& name) {
  if (name == "concat_project" || name == "concat") return JkMode::ConcatProject;
  if (name == "last") return JkMode::Last;
  throw Error(ErrorCode::ConfigError, "unknown jk_mode '" + name + "'");
}

Model init_model(const EncoderConfig& config, std::uint64_t seed) {
  config.validate();
  Model model;
  model.config = config;
  model.rng_seed = seed;
  Rng rng(seed);
  // reactant set first, then product set: creation order fixes sampling.
  init_side(model.params, rng, "reactant", config);
  init_side(model.params, rng, "product", config);
  model.params.insert("inter.w1", glorot(rng, 3 * config.d_model, config.emb_dim));
  model.params.insert("inter.b1", zeros_row(config.emb_dim));
  model.params.insert("inter.ln.g", ones_row(config.emb_dim));
  model.params.insert("inter.ln.b", zeros_row(config.emb_dim));
  model.params.insert("inter.w2", glorot(rng, config.emb_dim, config.emb_dim));
  model.params.insert("inter.b2", zeros_row(config.emb_dim));
  model.params.insert("cls.w", glorot(rng, config.emb_dim, 1));
  model.params.insert("cls.b", zeros_row(1));
  return model;
}

void save_checkpoint(const Model& model, const std::string& path) {
  json tensors = json::array();
  std::size_t offset = 0;
  for (const auto& [name, tensor] : model.params.entries()) {
    tensors.push_back({{"name", name}, {"shape", tensor.shape}, {"offset", offset}});
    offset += tensor.data.size() * sizeof(float);
  }
  const json manifest = {{"format", "rxnemb-checkpoint-v1"},
                         {"config", config_to_json(model.config)},
                         {"rng_seed", model.rng_seed},
                         {"tensors", tensors},
                         {"blob_bytes", offset}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::DataError, "cannot open " + path + " for writing");
  out << manifest.dump() << '\n';
  for (const auto& [name, tensor] : model.params.entries()) {
    out.write(reinterpret_cast<const char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.data.size() * sizeof(float)));
  }
  if (!out) throw Error(ErrorCode::DataError, "failed writing " + path);
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::DataError, "cannot open checkpoint " + path);
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorCode::DataError, "checkpoint " + path + " is missing its manifest");
  }
  json manifest;
  try {
    manifest = json::parse(header);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::DataError, "bad checkpoint manifest: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "rxnemb-checkpoint-v1") {
    throw Error(ErrorCode::DataError, "unrecognized checkpoint format in " + path);
  }
  Model model;
  model.config = config_from_json(manifest.at("config"));
  model.rng_seed = manifest.at("rng_seed").get<std::uint64_t>();
  const std::size_t blob_bytes = manifest.at("blob_bytes").get<std::size_t>();
  std::string blob(blob_bytes, '\0');
  in.read(blob.data(), static_cast<std::streamsize>(blob_bytes));
  if (in.gcount() != static_cast<std::streamsize>(blob_bytes)) {
    throw Error(ErrorCode::DataError, "checkpoint blob truncated in " + path);
  }
  for (const auto& entry : manifest.at("tensors")) {
    const std::string name = entry.at("name").get<std::string>();
    const std::vector<int> shape = entry.at("shape").get<std::vector<int>>();
    const std::size_t offset = entry.at("offset").get<std::size_t>();
    const std::size_t count = ad::Tensor<float>::element_count(shape);
    if (offset + count * sizeof(float) > blob_bytes) {
      throw Error(ErrorCode::DataError, "tensor " + name + " overruns checkpoint blob");
    }
    std::vector<float> data(count);
    std::memcpy(data.data(), blob.data() + offset, count * sizeof(float));
    model.params.insert(name, ad::Tensor<float>(shape, std::move(data)));
  }
  return model;
}

}  // namespace rxnemb::encoder
