#pragma once

#include <cstdint>
#include <vector>

#include "rxnemb/encoder/forward.hpp"
#include "rxnemb/encoder/model.hpp"
#include "rxnemb/pretrain/corpus.hpp"

namespace rxnemb::pretrain {

struct TrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double lr = 1e-3;
  std::uint64_t seed = 7;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  int patience = 5;  // early stopping on validation accuracy

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

// Stratified split indices into the corpus.
struct CorpusSplit {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;
};

CorpusSplit split_corpus(const std::vector<LabeledReaction>& corpus, const TrainConfig& cfg);

struct TrainResult {
  encoder::Model model;  // best-validation-accuracy checkpoint
  std::vector<EpochStats> history;
  CorpusSplit split;
  int best_epoch = 0;
};

// Binary cross-entropy training of the real/fictitious classifier, Adam,
// early stopping. Deterministic under (seed, config, corpus).
TrainResult train(const std::vector<LabeledReaction>& corpus,
                  const encoder::EncoderConfig& encoder_config, const TrainConfig& config);

struct EvalMetrics {
  double accuracy = 0.0;
  double auroc = 0.0;
};

// Accuracy at threshold 0.5 and rank-statistic AUROC (tied scores get
// averaged ranks).
EvalMetrics evaluate(const encoder::Model& model, const std::vector<LabeledReaction>& set);

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history);

}  // namespace rxnemb::pretrain
