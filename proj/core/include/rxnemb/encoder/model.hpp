#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rxnemb/ad/tensor.hpp"
#include "rxnemb/encoder/config.hpp"

namespace rxnemb::encoder {

// Named tensors sorted by name. Sorted order fixes the checkpoint layout
// and the optimizer's iteration order.
template <typename T>
class ParamStore {
 public:
  void insert(std::string name, ad::Tensor<T> tensor);
  ad::Tensor<T>& at(const std::string& name);
  const ad::Tensor<T>& at(const std::string& name) const;
  int index_of(const std::string& name) const;  // -1 if absent

  std::vector<std::pair<std::string, ad::Tensor<T>>>& entries() { return entries_; }
  const std::vector<std::pair<std::string, ad::Tensor<T>>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  template <typename U>
  ParamStore<U> cast() const {
    ParamStore<U> out;
    for (const auto& [name, tensor] : entries_) out.insert(name, tensor.template cast<U>());
    return out;
  }

 private:
  std::vector<std::pair<std::string, ad::Tensor<T>>> entries_;
};

// ModelCheckpoint: everything needed to rebuild the encoder. The reactant
// and product encoder sets are structurally identical but parameter
// independent; their names live under disjoint "reactant."/"product."
// prefixes.
struct Model {
  EncoderConfig config;
  ParamStore<float> params;
  std::uint64_t rng_seed = 0;
};

// Fresh model with Glorot-uniform weights drawn from `seed`.
Model init_model(const EncoderConfig& config, std::uint64_t seed);

// Checkpoint file: one-line JSON manifest (config + named tensor index with
// byte offsets) followed by a little-endian float32 blob. Round trip is
// bit-exact.
void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

extern template class ParamStore<float>;
extern template class ParamStore<double>;

}  // namespace rxnemb::encoder
