#include "rxnemb/pretrain/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rxnemb/ad/adam.hpp"
#include "rxnemb/ad/tape.hpp"
#include "rxnemb/common/rng.hpp"

namespace rxnemb::pretrain {

void TrainConfig::validate() const {
  if (epochs <= 0 || batch_size <= 0 || lr <= 0 || patience < 0) {
    throw Error(ErrorCode::ConfigError, "train config values must be positive");
  }
  const double total = train_fraction + val_fraction + test_fraction;
  if (std::abs(total - 1.0) > 1e-9 || train_fraction <= 0 || val_fraction < 0 ||
      test_fraction < 0) {
    throw Error(ErrorCode::ConfigError, "split fractions must be nonnegative and sum to 1");
  }
}

CorpusSplit split_corpus(const std::vector<LabeledReaction>& corpus, const TrainConfig& cfg) {
  std::vector<int> real_idx, fict_idx;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (corpus[i].is_real ? real_idx : fict_idx).push_back(static_cast<int>(i));
  }
  if (real_idx.empty() || fict_idx.empty()) {
    throw Error(ErrorCode::SingleClassCorpus, "corpus must contain both classes");
  }
  Rng rng(cfg.seed ^ 0x5711CE5AULL);
  CorpusSplit split;
  for (std::vector<int>* cls : {&real_idx, &fict_idx}) {
    rng.shuffle(*cls);
    const int n = static_cast<int>(cls->size());
    const int n_val = static_cast<int>(std::floor(cfg.val_fraction * n));
    const int n_test = static_cast<int>(std::floor(cfg.test_fraction * n));
    const int n_train = n - n_val - n_test;
    for (int i = 0; i < n; ++i) {
      const int idx = (*cls)[static_cast<std::size_t>(i)];
      if (i < n_train) {
        split.train.push_back(idx);
      } else if (i < n_train + n_val) {
        split.val.push_back(idx);
      } else {
        split.test.push_back(idx);
      }
    }
  }
  return split;
}

namespace {

double subset_accuracy(const encoder::Model& model, const std::vector<LabeledReaction>& corpus,
                       const std::vector<int>& subset) {
  int correct = 0;
  for (int idx : subset) {
    const LabeledReaction& entry = corpus[static_cast<std::size_t>(idx)];
    const auto [emb, attn] = encoder::embed_reaction(model, entry.reaction);
    const float p = encoder::classify_real(model, emb);
    const bool predicted_real = p >= 0.5f;
    if (predicted_real == entry.is_real) ++correct;
  }
  return subset.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(subset.size());
}

}  // namespace

TrainResult train(const std::vector<LabeledReaction>& corpus,
                  const encoder::EncoderConfig& encoder_config, const TrainConfig& config) {
  config.validate();
  encoder_config.validate();

  TrainResult result;
  result.split = split_corpus(corpus, config);
  // Tiny corpora can floor the validation split to zero; fall back to the
  // training split so early stopping still has a signal.
  const std::vector<int>& val_set =
      result.split.val.empty() ? result.split.train : result.split.val;

  encoder::Model model = encoder::init_model(encoder_config, config.seed);

  std::vector<ad::Tensor<float>*> param_ptrs;
  for (auto& [name, tensor] : model.params.entries()) param_ptrs.push_back(&tensor);
  ad::AdamState<float> adam = ad::AdamState<float>::init(
      [&] {
        std::vector<const ad::Tensor<float>*> view;
        for (auto* p : param_ptrs) view.push_back(p);
        return view;
      }());
  ad::AdamConfig adam_cfg;
  adam_cfg.lr = config.lr;

  Rng epoch_rng(config.seed ^ 0xE40C45ULL);
  std::vector<int> order = result.split.train;

  encoder::Model best = model;
  double best_acc = -1.0;
  int best_epoch = 0;
  int since_best = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    epoch_rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      ad::Tape<float> tape;
      encoder::BoundModel<float> bound = encoder::bind_model(tape, model.params, model.config);
      std::vector<ad::Tape<float>::Var> logits;
      std::vector<float> targets;
      for (std::size_t i = start; i < end; ++i) {
        const LabeledReaction& entry = corpus[static_cast<std::size_t>(order[i])];
        auto vars = encoder::encode_reaction_on_tape(tape, bound, entry.reaction);
        logits.push_back(vars.logit);
        targets.push_back(entry.is_real ? 1.0f : 0.0f);
      }
      const auto batch_logits = tape.concat_rows(logits);
      const auto loss = tape.bce_with_logits(batch_logits, targets);
      tape.backward(loss);
      loss_sum += static_cast<double>(tape.value(loss).data[0]) * static_cast<double>(end - start);
      seen += end - start;

      std::vector<ad::Tensor<float>> grads;
      grads.reserve(bound.vars.size());
      for (auto v : bound.vars) grads.push_back(tape.grad(v));
      std::vector<const ad::Tensor<float>*> grad_ptrs;
      grad_ptrs.reserve(grads.size());
      for (const auto& g : grads) grad_ptrs.push_back(&g);
      ad::adam_step(param_ptrs, grad_ptrs, adam, adam_cfg);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = seen ? loss_sum / static_cast<double>(seen) : 0.0;
    stats.val_accuracy = subset_accuracy(model, corpus, val_set);
    result.history.push_back(stats);

    if (stats.val_accuracy > best_acc) {
      best_acc = stats.val_accuracy;
      best = model;
      best_epoch = epoch;
      since_best = 0;
    } else {
      ++since_best;
      if (since_best >= config.patience) break;
    }
  }

  result.model = std::move(best);
  result.best_epoch = best_epoch;
  return result;
}

EvalMetrics evaluate(const encoder::Model& model, const std::vector<LabeledReaction>& set) {
  if (set.empty()) {
    throw Error(ErrorCode::EmptySet, "evaluate needs a non-empty set");
  }
  std::vector<std::pair<double, bool>> scored;  // (p_real, is_real)
  scored.reserve(set.size());
  int correct = 0;
  std::size_t positives = 0, negatives = 0;
  for (const LabeledReaction& entry : set) {
    const auto [emb, attn] = encoder::embed_reaction(model, entry.reaction);
    const double p = static_cast<double>(encoder::classify_real(model, emb));
    scored.emplace_back(p, entry.is_real);
    if ((p >= 0.5) == entry.is_real) ++correct;
    (entry.is_real ? positives : negatives)++;
  }
  EvalMetrics metrics;
  metrics.accuracy = static_cast<double>(correct) / static_cast<double>(set.size());
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::SingleClassCorpus, "auroc needs both classes");
  }
  // Mann-Whitney U from the rank sum of the positive class; tied scores
  // receive averaged ranks.
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < scored.size()) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t t = i; t < j; ++t) {
      if (scored[t].second) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  const double n_pos = static_cast<double>(positives);
  const double n_neg = static_cast<double>(negatives);
  const double u = rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0;
  metrics.auroc = u / (n_pos * n_neg);
  return metrics;
}

void write_history_csv(const std::string& path, const std::vector<EpochStats>& history) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::DataError, "cannot open " + path + " for writing");
  out << "epoch,train_loss,val_acc\n";
  char line[96];
  for (const EpochStats& row : history) {
    std::snprintf(line, sizeof(line), "%d,%.6f,%.4f\n", row.epoch, row.train_loss,
                  row.val_accuracy);
    out << line;
  }
}

}  // namespace rxnemb::pretrain
