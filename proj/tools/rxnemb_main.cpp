#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rxnemb/chem/smiles.hpp"
#include "rxnemb/cluster/cluster.hpp"
#include "rxnemb/common/error.hpp"
#include "rxnemb/common/parallel.hpp"
#include "rxnemb/encoder/forward.hpp"
#include "rxnemb/io/embedding_file.hpp"
#include "rxnemb/io/manifest.hpp"
#include "rxnemb/io/pipeline_config.hpp"
#include "rxnemb/pretrain/corpus.hpp"
#include "rxnemb/pretrain/train.hpp"
#include "rxnemb/project/umap.hpp"
#include "rxnemb/viz/attention.hpp"
#include "rxnemb/viz/svg.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rxnemb;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::KTooLarge:
    case ErrorCode::LengthMismatch:
      return true;
    default:
      return false;
  }
}

struct CommonArgs {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_dir;

  io::PipelineConfig resolve() const {
    io::PipelineConfig cfg;
    if (!config_path.empty()) cfg = io::load_pipeline_config(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.train.seed = *seed;
      cfg.project.seed = *seed;
    } else {
      cfg.train.seed = cfg.seed;
      cfg.project.seed = cfg.seed;
    }
    return cfg;
  }
};

void ensure_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) throw Error(ErrorCode::ConfigError, "--out is required");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::DataError, "cannot create " + out_dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::DataError, "cannot write " + path);
  out << text;
}

void write_resolved_config(const io::PipelineConfig& cfg, const std::string& out_dir) {
  write_text(out_dir + "/config.json", io::pipeline_config_to_json(cfg));
}

std::vector<pretrain::LabeledReaction> load_corpus(const std::string& path,
                                                   std::vector<std::string>* warnings) {
  std::vector<pretrain::LabeledReaction> corpus;
  for (const pretrain::ReactionRecord& rec : pretrain::read_reaction_jsonl(path)) {
    try {
      pretrain::LabeledReaction entry;
      entry.reaction = chem::parse_reaction(rec.rxn_smiles, rec.id);
      if (rec.label) entry.reaction.class_label = rec.label;
      entry.is_real = rec.is_real.value_or(true);
      entry.source_id = rec.id;
      corpus.push_back(std::move(entry));
    } catch (const Error& e) {
      if (warnings) warnings->push_back(rec.id + ": " + e.what());
    }
  }
  return corpus;
}

int cmd_pretrain(const CommonArgs& common, int synth_n, const std::string& corpus_path,
                 const std::string& jk_flag) {
  io::PipelineConfig cfg = common.resolve();
  if (!jk_flag.empty()) cfg.encoder.jk_mode = encoder::jk_mode_from_name(jk_flag);
  ensure_out_dir(common.out_dir);

  std::vector<std::string> warnings;
  std::vector<pretrain::LabeledReaction> corpus;
  std::vector<std::string> inputs;
  if (!corpus_path.empty()) {
    corpus = load_corpus(corpus_path, &warnings);
    inputs.push_back(corpus_path);
    const bool any_fict = std::any_of(corpus.begin(), corpus.end(),
                                      [](const auto& e) { return !e.is_real; });
    if (!any_fict) {
      std::vector<chem::Reaction> real;
      for (const auto& e : corpus) real.push_back(e.reaction);
      corpus = pretrain::make_fictitious_corpus(real, cfg.seed, &warnings);
    }
  } else if (synth_n > 0) {
    const std::vector<chem::Reaction> real = pretrain::synth_templates(synth_n, cfg.seed);
    corpus = pretrain::make_fictitious_corpus(real, cfg.seed, &warnings);
  } else {
    throw Error(ErrorCode::ConfigError, "either --synth N or --corpus FILE is required");
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  pretrain::write_corpus_jsonl(common.out_dir + "/corpus.jsonl", corpus);
  pretrain::TrainResult result = pretrain::train(corpus, cfg.encoder, cfg.train);
  encoder::save_checkpoint(result.model, common.out_dir + "/model.ckpt");
  pretrain::write_history_csv(common.out_dir + "/history.csv", result.history);

  if (!result.split.test.empty()) {
    std::vector<pretrain::LabeledReaction> test_set;
    for (int idx : result.split.test) test_set.push_back(corpus[static_cast<std::size_t>(idx)]);
    const pretrain::EvalMetrics metrics = pretrain::evaluate(result.model, test_set);
    std::cerr << "test accuracy " << metrics.accuracy << ", auroc " << metrics.auroc << "\n";
  }

  write_resolved_config(cfg, common.out_dir);
  io::write_manifest(common.out_dir, "pretrain", cfg.seed, inputs,
                     io::pipeline_config_to_json(cfg));
  return kExitOk;
}

int cmd_embed(const CommonArgs& common, const std::string& ckpt_path,
              const std::string& input_path) {
  io::PipelineConfig cfg = common.resolve();
  ensure_out_dir(common.out_dir);
  const encoder::Model model = encoder::load_checkpoint(ckpt_path);

  const std::vector<pretrain::ReactionRecord> records = pretrain::read_reaction_jsonl(input_path);
  std::vector<std::optional<chem::Reaction>> parsed(records.size());
  int skipped = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      parsed[i] = chem::parse_reaction(records[i].rxn_smiles, records[i].id);
    } catch (const Error& e) {
      std::cerr << "skipping " << records[i].id << ": " << e.what() << "\n";
      ++skipped;
    }
  }

  io::EmbeddingFile out;
  out.matrix.dim = model.config.emb_dim;
  out.skipped = skipped;
  std::vector<int> kept;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i]) kept.push_back(static_cast<int>(i));
  }
  if (kept.empty()) {
    throw Error(ErrorCode::DataError, "zero reactions embedded from " + input_path);
  }
  out.matrix.count = static_cast<int>(kept.size());
  out.matrix.values.assign(
      static_cast<std::size_t>(out.matrix.count) * static_cast<std::size_t>(out.matrix.dim), 0.0f);
  out.ids.resize(kept.size());
  // Bounded worker pool; each slot is written by exactly one worker, so
  // output ordering follows the input index regardless of thread count.
  parallel_for(kept.size(), [&](std::size_t slot) {
    const int rec = kept[slot];
    const auto [emb, attn] =
        encoder::embed_reaction(model, *parsed[static_cast<std::size_t>(rec)]);
    std::copy(emb.values.begin(), emb.values.end(),
              out.matrix.values.begin() +
                  static_cast<std::ptrdiff_t>(slot * static_cast<std::size_t>(out.matrix.dim)));
    out.ids[slot] = records[static_cast<std::size_t>(rec)].id;
  });

  io::save_embeddings(common.out_dir + "/embeddings.bin", out);
  write_resolved_config(cfg, common.out_dir);
  io::write_manifest(common.out_dir, "embed", cfg.seed, {ckpt_path, input_path},
                     io::pipeline_config_to_json(cfg));
  return kExitOk;
}

int cmd_cluster(const CommonArgs& common, const std::string& emb_path, int k_flag,
                const std::string& metric_flag, const std::string& inter_flag) {
  io::PipelineConfig cfg = common.resolve();
  if (k_flag > 0) cfg.cluster.k = k_flag;
  if (!metric_flag.empty()) cfg.cluster.metric = cluster::metric_from_name(metric_flag);
  if (!inter_flag.empty()) {
    cfg.cluster.inter_group = cluster::inter_group_mode_from_name(inter_flag);
  }
  ensure_out_dir(common.out_dir);

  const io::EmbeddingFile embs = io::load_embeddings(emb_path);
  if (cfg.cluster.k > embs.matrix.count) {
    throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(cfg.cluster.k) + " exceeds " +
                                          std::to_string(embs.matrix.count) + " embeddings");
  }

  const std::vector<int> centroids =
      cluster::kennard_stone_select(embs.matrix, cfg.cluster.metric, cfg.cluster.k);
  const cluster::ClusterAssignment assignment =
      cluster::assign_nearest(embs.matrix, cfg.cluster.metric, centroids);
  const cluster::GroupSummary groups = cluster::group_centroid_vectors(
      embs.matrix, assignment, cfg.cluster.metric, cfg.cluster.inter_group);
  const cluster::Dendrogram tree = cluster::average_linkage_tree(groups.distances);
  const std::vector<int> order = cluster::optimal_leaf_order(tree, groups.distances);

  // assignments.csv: reaction_id, cluster_id, is_centroid
  {
    std::ofstream out(common.out_dir + "/assignments.csv");
    if (!out) throw Error(ErrorCode::DataError, "cannot write assignments.csv");
    out << "reaction_id,cluster_id,is_centroid\n";
    std::vector<char> is_centroid(static_cast<std::size_t>(embs.matrix.count), 0);
    for (int c : centroids) is_centroid[static_cast<std::size_t>(c)] = 1;
    for (int i = 0; i < embs.matrix.count; ++i) {
      out << embs.ids[static_cast<std::size_t>(i)] << ','
          << assignment.labels[static_cast<std::size_t>(i)] << ','
          << (is_centroid[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
    }
  }

  // clusters.json mirrors the published per-cluster table: id, size,
  // centroid reaction id.
  {
    json rows = json::array();
    for (int c = 0; c < assignment.k; ++c) {
      rows.push_back({{"cluster_id", c},
                      {"size", groups.sizes[static_cast<std::size_t>(c)]},
                      {"centroid_id",
                       embs.ids[static_cast<std::size_t>(assignment.centroid_indices[static_cast<std::size_t>(c)])]}});
    }
    write_text(common.out_dir + "/clusters.json", json(rows).dump(2) + "\n");
  }

  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(assignment.k));
  for (int c = 0; c < assignment.k; ++c) labels.push_back("C" + std::to_string(c + 1));
  const viz::RenderOutput heatmap = viz::render_heatmap_svg(groups.distances, order, labels);
  write_text(common.out_dir + "/heatmap.svg", heatmap.svg);
  write_text(common.out_dir + "/heatmap.json", heatmap.sidecar_json);

  write_resolved_config(cfg, common.out_dir);
  io::write_manifest(common.out_dir, "cluster", cfg.seed, {emb_path},
                     io::pipeline_config_to_json(cfg));
  return kExitOk;
}

int cmd_project(const CommonArgs& common, const std::vector<std::string>& emb_paths,
                std::vector<std::string> tags, int n_neighbors_flag, double min_dist_flag) {
  io::PipelineConfig cfg = common.resolve();
  if (n_neighbors_flag > 0) cfg.project.n_neighbors = n_neighbors_flag;
  if (min_dist_flag > 0) cfg.project.min_dist = min_dist_flag;
  ensure_out_dir(common.out_dir);
  if (emb_paths.empty()) {
    throw Error(ErrorCode::ConfigError, "at least one --emb file is required");
  }
  while (tags.size() < emb_paths.size()) {
    tags.push_back(fs::path(emb_paths[tags.size()]).stem().string());
  }

  EmbeddingMatrix all;
  std::vector<std::string> ids;
  std::vector<int> point_tags;
  for (std::size_t f = 0; f < emb_paths.size(); ++f) {
    const io::EmbeddingFile file = io::load_embeddings(emb_paths[f]);
    if (all.count == 0) {
      all.dim = file.matrix.dim;
    } else if (file.matrix.dim != all.dim) {
      throw Error(ErrorCode::LengthMismatch, "embedding files have different dimensions");
    }
    all.values.insert(all.values.end(), file.matrix.values.begin(), file.matrix.values.end());
    all.count += file.matrix.count;
    ids.insert(ids.end(), file.ids.begin(), file.ids.end());
    point_tags.insert(point_tags.end(), static_cast<std::size_t>(file.matrix.count),
                      static_cast<int>(f));
  }
  if (all.count < cfg.project.n_neighbors + 1) {
    throw Error(ErrorCode::KTooLarge, "need more points than n_neighbors to project");
  }

  const project::Layout layout = project::project_embeddings(all, cfg.project);

  {
    std::ofstream out(common.out_dir + "/layout.csv");
    if (!out) throw Error(ErrorCode::DataError, "cannot write layout.csv");
    out << "reaction_id,x,y,dataset_tag\n";
    char line[160];
    for (int i = 0; i < layout.n; ++i) {
      std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,%s\n",
                    ids[static_cast<std::size_t>(i)].c_str(), layout.x(i), layout.y(i),
                    tags[static_cast<std::size_t>(point_tags[static_cast<std::size_t>(i)])].c_str());
      out << line;
    }
  }

  std::vector<viz::ScatterPoint> points;
  points.reserve(static_cast<std::size_t>(layout.n));
  for (int i = 0; i < layout.n; ++i) {
    points.push_back({layout.x(i), layout.y(i), point_tags[static_cast<std::size_t>(i)]});
  }
  const viz::RenderOutput scatter = viz::render_scatter_svg(points, tags);
  write_text(common.out_dir + "/scatter.svg", scatter.svg);
  write_text(common.out_dir + "/scatter.json", scatter.sidecar_json);

  write_resolved_config(cfg, common.out_dir);
  io::write_manifest(common.out_dir, "project", cfg.seed, emb_paths,
                     io::pipeline_config_to_json(cfg));
  return kExitOk;
}

int cmd_attn(const CommonArgs& common, const std::string& ckpt_path, const std::string& rxn_smiles) {
  io::PipelineConfig cfg = common.resolve();
  ensure_out_dir(common.out_dir);
  const encoder::Model model = encoder::load_checkpoint(ckpt_path);
  const chem::Reaction rxn = chem::parse_reaction(rxn_smiles, "query");

  const auto [emb, bundle] = encoder::embed_reaction(model, rxn);

  const auto pool_r = viz::aggregate_pool_attention(bundle.reactants);
  const auto pool_p = viz::aggregate_pool_attention(bundle.products);
  const auto inter_r = viz::aggregate_transformer_attention(bundle.reactants);
  const auto inter_p = viz::aggregate_transformer_attention(bundle.products);

  json j;
  j["rxn_smiles"] = rxn_smiles;
  auto side_json = [](const std::vector<viz::MoleculeIntensities>& mols,
                      const viz::InterMoleculeAttention& inter) {
    json side;
    json molecules = json::array();
    for (const auto& m : mols) {
      molecules.push_back({{"pool_weights", m.raw}, {"intensity", m.intensity}});
    }
    side["molecules"] = std::move(molecules);
    json rows = json::array();
    for (int i = 0; i < inter.n; ++i) {
      json row = json::array();
      for (int c = 0; c < inter.n; ++c) row.push_back(inter.at(i, c));
      rows.push_back(std::move(row));
    }
    side["transformer_attention"] = std::move(rows);
    return side;
  };
  j["reactants"] = side_json(pool_r, inter_r);
  j["products"] = side_json(pool_p, inter_p);
  write_text(common.out_dir + "/attention.json", j.dump(2) + "\n");

  std::vector<std::vector<float>> intensities;
  for (const auto& m : pool_r) intensities.push_back(m.intensity);
  for (const auto& m : pool_p) intensities.push_back(m.intensity);
  const viz::RenderOutput svg = viz::render_attention_svg(rxn, intensities);
  write_text(common.out_dir + "/attention.svg", svg.svg);

  write_resolved_config(cfg, common.out_dir);
  io::write_manifest(common.out_dir, "attn", cfg.seed, {ckpt_path},
                     io::pipeline_config_to_json(cfg));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RXNEmb pipeline: pretrain a reaction encoder, emit embeddings, "
               "cluster, project and inspect attention"};
  app.require_subcommand(1);

  CommonArgs common;
  std::uint64_t seed_value = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_value, "global RNG seed")
        ->each([&](const std::string&) { common.seed = seed_value; });
    cmd->add_option("--config", common.config_path, "pipeline config JSON");
    cmd->add_option("--out", common.out_dir, "output directory")->required();
  };

  // pretrain
  auto* pre = app.add_subcommand("pretrain", "build a corpus and train the encoder");
  int synth_n = 0;
  std::string corpus_path, jk_flag;
  pre->add_option("--synth", synth_n, "generate N synthetic template reactions");
  pre->add_option("--corpus", corpus_path, "reaction corpus JSONL");
  pre->add_option("--jk", jk_flag, "jumping knowledge mode: concat|last");
  add_common(pre);

  // embed
  auto* emb = app.add_subcommand("embed", "embed reactions with a checkpoint");
  std::string ckpt_path, input_path;
  emb->add_option("--ckpt", ckpt_path, "model checkpoint")->required();
  emb->add_option("--in", input_path, "reactions JSONL")->required();
  add_common(emb);

  // cluster
  auto* clu = app.add_subcommand("cluster", "Kennard-Stone clustering and heatmap");
  std::string cluster_emb, metric_flag, inter_flag;
  int k_flag = 0;
  clu->add_option("--emb", cluster_emb, "embedding file")->required();
  clu->add_option("--k", k_flag, "number of clusters");
  clu->add_option("--metric", metric_flag, "euclidean|cosine");
  clu->add_option("--inter-group", inter_flag, "mean|average_pairwise|medoid");
  add_common(clu);

  // project
  auto* prj = app.add_subcommand("project", "2-D projection of embedding files");
  std::vector<std::string> prj_embs, prj_tags;
  int n_neighbors_flag = 0;
  double min_dist_flag = 0.0;
  prj->add_option("--emb", prj_embs, "embedding file (repeatable)")->required();
  prj->add_option("--tag", prj_tags, "dataset tag per --emb (repeatable)");
  prj->add_option("--n-neighbors", n_neighbors_flag, "neighborhood size");
  prj->add_option("--min-dist", min_dist_flag, "minimum distance");
  add_common(prj);

  // attn
  auto* att = app.add_subcommand("attn", "attention weights for one reaction");
  std::string attn_ckpt, attn_rxn;
  att->add_option("--ckpt", attn_ckpt, "model checkpoint")->required();
  att->add_option("--rxn", attn_rxn, "reaction SMILES")->required();
  add_common(att);

  CLI11_PARSE(app, argc, argv);

  try {
    if (pre->parsed()) return cmd_pretrain(common, synth_n, corpus_path, jk_flag);
    if (emb->parsed()) return cmd_embed(common, ckpt_path, input_path);
    if (clu->parsed()) return cmd_cluster(common, cluster_emb, k_flag, metric_flag, inter_flag);
    if (prj->parsed()) {
      return cmd_project(common, prj_embs, prj_tags, n_neighbors_flag, min_dist_flag);
    }
    if (att->parsed()) return cmd_attn(common, attn_ckpt, attn_rxn);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitConfig : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitConfig;
}
