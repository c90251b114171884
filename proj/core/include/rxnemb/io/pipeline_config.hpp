#pragma once

#include <cstdint>
#include <string>

#include "rxnemb/cluster/cluster.hpp"
#include "rxnemb/encoder/config.hpp"
#include "rxnemb/pretrain/train.hpp"
#include "rxnemb/project/umap.hpp"

namespace rxnemb::io {

struct ClusterParams {
  int k = 50;
  cluster::Metric metric = cluster::Metric::Euclidean;
  cluster::InterGroupMode inter_group = cluster::InterGroupMode::MeanEmbedding;
};

// One document holding every stage's knobs plus the global seed. Unknown
// keys are rejected; every run writes the fully resolved form next to its
// outputs.
struct PipelineConfig {
  std::uint64_t seed = 7;
  encoder::EncoderConfig encoder;
  pretrain::TrainConfig train;
  ClusterParams cluster;
  project::LayoutParams project;
};

PipelineConfig parse_pipeline_config(const std::string& json_text);
PipelineConfig load_pipeline_config(const std::string& path);
std::string pipeline_config_to_json(const PipelineConfig& config);

}  // namespace rxnemb::io
