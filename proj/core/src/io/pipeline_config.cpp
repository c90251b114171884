#include "rxnemb/io/pipeline_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rxnemb/common/error.hpp"

namespace rxnemb::io {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::ConfigError, "unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "config is not valid JSON: " + std::string(e.what()));
  }
  reject_unknown(j, {"seed", "encoder", "train", "cluster", "project"}, "config root");

  PipelineConfig cfg;
  maybe(j, "seed", cfg.seed);

  if (j.contains("encoder")) {
    const json& e = j.at("encoder");
    reject_unknown(e,
                   {"gnn_hidden", "gnn_layers", "jk_mode", "d_model", "tf_layers", "tf_heads",
                    "ffn_dim", "emb_dim", "max_components"},
                   "encoder");
    maybe(e, "gnn_hidden", cfg.encoder.gnn_hidden);
    maybe(e, "gnn_layers", cfg.encoder.gnn_layers);
    if (e.contains("jk_mode")) {
      cfg.encoder.jk_mode = encoder::jk_mode_from_name(e.at("jk_mode").get<std::string>());
    }
    maybe(e, "d_model", cfg.encoder.d_model);
    maybe(e, "tf_layers", cfg.encoder.tf_layers);
    maybe(e, "tf_heads", cfg.encoder.tf_heads);
    maybe(e, "ffn_dim", cfg.encoder.ffn_dim);
    maybe(e, "emb_dim", cfg.encoder.emb_dim);
    maybe(e, "max_components", cfg.encoder.max_components);
    cfg.encoder.validate();
  }

  if (j.contains("train")) {
    const json& t = j.at("train");
    reject_unknown(t,
                   {"epochs", "batch_size", "lr", "train_fraction", "val_fraction",
                    "test_fraction", "patience"},
                   "train");
    maybe(t, "epochs", cfg.train.epochs);
    maybe(t, "batch_size", cfg.train.batch_size);
    maybe(t, "lr", cfg.train.lr);
    maybe(t, "train_fraction", cfg.train.train_fraction);
    maybe(t, "val_fraction", cfg.train.val_fraction);
    maybe(t, "test_fraction", cfg.train.test_fraction);
    maybe(t, "patience", cfg.train.patience);
    cfg.train.validate();
  }

  if (j.contains("cluster")) {
    const json& c = j.at("cluster");
    reject_unknown(c, {"k", "metric", "inter_group"}, "cluster");
    maybe(c, "k", cfg.cluster.k);
    if (c.contains("metric")) {
      cfg.cluster.metric = cluster::metric_from_name(c.at("metric").get<std::string>());
    }
    if (c.contains("inter_group")) {
      cfg.cluster.inter_group =
          cluster::inter_group_mode_from_name(c.at("inter_group").get<std::string>());
    }
  }

  if (j.contains("project")) {
    const json& p = j.at("project");
    reject_unknown(p,
                   {"n_neighbors", "min_dist", "epochs", "negative_samples", "learning_rate",
                    "standardize"},
                   "project");
    maybe(p, "n_neighbors", cfg.project.n_neighbors);
    maybe(p, "min_dist", cfg.project.min_dist);
    maybe(p, "epochs", cfg.project.epochs);
    maybe(p, "negative_samples", cfg.project.negative_samples);
    maybe(p, "learning_rate", cfg.project.learning_rate);
    maybe(p, "standardize", cfg.project.standardize);
  }
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pipeline_config(buf.str());
}

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  const json j = {
      {"seed", cfg.seed},
      {"encoder",
       {{"gnn_hidden", cfg.encoder.gnn_hidden},
        {"gnn_layers", cfg.encoder.gnn_layers},
        {"jk_mode", encoder::jk_mode_name(cfg.encoder.jk_mode)},
        {"d_model", cfg.encoder.d_model},
        {"tf_layers", cfg.encoder.tf_layers},
        {"tf_heads", cfg.encoder.tf_heads},
        {"ffn_dim", cfg.encoder.ffn_dim},
        {"emb_dim", cfg.encoder.emb_dim},
        {"max_components", cfg.encoder.max_components}}},
      {"train",
       {{"epochs", cfg.train.epochs},
        {"batch_size", cfg.train.batch_size},
        {"lr", cfg.train.lr},
        {"train_fraction", cfg.train.train_fraction},
        {"val_fraction", cfg.train.val_fraction},
        {"test_fraction", cfg.train.test_fraction},
        {"patience", cfg.train.patience}}},
      {"cluster",
       {{"k", cfg.cluster.k},
        {"metric", cluster::metric_name(cfg.cluster.metric)},
        {"inter_group", cluster::inter_group_mode_name(cfg.cluster.inter_group)}}},
      {"project",
       {{"n_neighbors", cfg.project.n_neighbors},
        {"min_dist", cfg.project.min_dist},
        {"epochs", cfg.project.epochs},
        {"negative_samples", cfg.project.negative_samples},
        {"learning_rate", cfg.project.learning_rate},
        {"standardize", cfg.project.standardize}}}};
  return j.dump(2) + "\n";
}

}  // namespace rxnemb::io
