#include <benchmark/benchmark.h>

#include "rxnemb/ad/tape.hpp"
#include "rxnemb/chem/smiles.hpp"
#include "rxnemb/cluster/cluster.hpp"
#include "rxnemb/common/rng.hpp"
#include "rxnemb/encoder/forward.hpp"
#include "rxnemb/pretrain/corpus.hpp"

namespace {

using namespace rxnemb;

void BM_ParseMolecule(benchmark::State& state) {
  const std::string smiles = "CC(C)c1nnc2ccc(-c3cnco3)cn12";
  for (auto _ : state) {
    auto g = chem::parse_molecule(smiles);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_ParseMolecule);

void BM_Matmul64(benchmark::State& state) {
  Rng rng(1);
  const int n = static_cast<int>(state.range(0));
  std::vector<float> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (auto& x : a) x = static_cast<float>(rng.uniform(-1, 1));
  for (auto _ : state) {
    ad::Tape<float> tape;
    auto va = tape.constant(ad::Tensor<float>::matrix(n, n, a));
    auto vb = tape.param(ad::Tensor<float>::matrix(n, n, a));
    auto c = tape.matmul(va, vb);
    benchmark::DoNotOptimize(tape.value(c));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Matmul64)->Arg(16)->Arg(64)->Arg(128);

void BM_EmbedReaction(benchmark::State& state) {
  const auto reactions = pretrain::synth_templates(4, 7);
  const auto model = encoder::init_model({}, 7);
  std::size_t i = 0;
  for (auto _ : state) {
    auto [emb, attn] = encoder::embed_reaction(model, reactions[i % reactions.size()]);
    benchmark::DoNotOptimize(emb);
    ++i;
  }
}
BENCHMARK(BM_EmbedReaction);

void BM_PairwiseDistances(benchmark::State& state) {
  Rng rng(3);
  EmbeddingMatrix embs;
  embs.count = static_cast<int>(state.range(0));
  embs.dim = 128;
  embs.values.resize(static_cast<std::size_t>(embs.count) * 128);
  for (auto& v : embs.values) v = static_cast<float>(rng.gaussian());
  for (auto _ : state) {
    auto dm = cluster::pairwise_distances(embs, cluster::Metric::Euclidean);
    benchmark::DoNotOptimize(dm);
  }
}
BENCHMARK(BM_PairwiseDistances)->Arg(256)->Arg(1024);

void BM_KennardStone(benchmark::State& state) {
  Rng rng(5);
  EmbeddingMatrix embs;
  embs.count = static_cast<int>(state.range(0));
  embs.dim = 64;
  embs.values.resize(static_cast<std::size_t>(embs.count) * 64);
  for (auto& v : embs.values) v = static_cast<float>(rng.gaussian());
  for (auto _ : state) {
    auto sel = cluster::kennard_stone_select(embs, cluster::Metric::Euclidean, 50);
    benchmark::DoNotOptimize(sel);
  }
}
BENCHMARK(BM_KennardStone)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
