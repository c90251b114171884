#pragma once

#include <cmath>
#include <vector>

#include "rxnemb/ad/tensor.hpp"

namespace rxnemb::ad {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second-moment buffers, one per parameter tensor, plus the shared
// step counter used for bias correction.
template <typename T>
struct AdamState {
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;
  long step = 0;

  static AdamState init(const std::vector<const Tensor<T>*>& params) {
    AdamState s;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Tensor<T>* p : params) {
      s.m.push_back(Tensor<T>::zeros(p->shape));
      s.v.push_back(Tensor<T>::zeros(p->shape));
    }
    return s;
  }
};

// Standard Adam update with bias correction, in place.
template <typename T>
void adam_step(const std::vector<Tensor<T>*>& params,
               const std::vector<const Tensor<T>*>& grads, AdamState<T>& state,
               const AdamConfig& cfg = {}) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size()) {
    throw Error(ErrorCode::ShapeMismatch, "adam_step: list lengths disagree");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor<T>& w = *params[p];
    const Tensor<T>& g = *grads[p];
    if (w.shape != g.shape || w.shape != state.m[p].shape) {
      throw Error(ErrorCode::ShapeMismatch, "adam_step: tensor " + std::to_string(p) +
                                                " shape mismatch " + w.shape_string() +
                                                " vs " + g.shape_string());
    }
    Tensor<T>& m = state.m[p];
    Tensor<T>& v = state.v[p];
    for (std::size_t i = 0; i < w.data.size(); ++i) {
      const double gi = static_cast<double>(g.data[i]);
      const double mi = cfg.beta1 * static_cast<double>(m.data[i]) + (1.0 - cfg.beta1) * gi;
      const double vi = cfg.beta2 * static_cast<double>(v.data[i]) + (1.0 - cfg.beta2) * gi * gi;
      m.data[i] = static_cast<T>(mi);
      v.data[i] = static_cast<T>(vi);
      const double mhat = mi / bc1;
      const double vhat = vi / bc2;
      w.data[i] = static_cast<T>(static_cast<double>(w.data[i]) -
                                 cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps));
    }
  }
}

}  // namespace rxnemb::ad
