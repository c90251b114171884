#pragma once

#include <string>

#include "rxnemb/common/error.hpp"

namespace rxnemb::encoder {

enum class JkMode { ConcatProject, Last };

const char* jk_mode_name(JkMode mode);
JkMode jk_mode_from_name(const std::string& name);

// Architecture hyperparameters. Defaults are sized so CPU training of the
// synthetic corpus finishes in minutes; gnn_layers/tf_layers stay at 4 in
// paper-faithful mode.
struct EncoderConfig {
  int gnn_hidden = 64;
  int gnn_layers = 4;
  JkMode jk_mode = JkMode::ConcatProject;
  int d_model = 64;
  int tf_layers = 4;
  int tf_heads = 4;
  int ffn_dim = 128;
  int emb_dim = 128;
  int max_components = 16;

  static constexpr int kAtomFeatureDim = 28;

  int head_dim() const { return d_model / tf_heads; }

  void validate() const {
    if (gnn_hidden <= 0 || gnn_layers <= 0 || d_model <= 0 || tf_layers <= 0 ||
        tf_heads <= 0 || ffn_dim <= 0 || emb_dim <= 0 || max_components <= 0) {
      throw Error(ErrorCode::ConfigError, "encoder dimensions must be positive");
    }
    if (d_model % tf_heads != 0) {
      throw Error(ErrorCode::ConfigError, "d_model must be divisible by tf_heads");
    }
  }

  bool operator==(const EncoderConfig&) const = default;
};

}  // namespace rxnemb::encoder
