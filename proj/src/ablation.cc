// SPDX-License-Identifier: Apache-2.0
#include "relrec/ablation.h"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "relrec/retrieval.h"

namespace relrec {
namespace {

using nlohmann::ordered_json;

AblationRow trained_row(std::string name, std::string ratio, double w_co, double w_sem,
                        bool use_text, bool use_visual, bool opc) {
  AblationRow row;
  row.name = std::move(name);
  row.ratio = std::move(ratio);
  row.trained = true;
  row.weights.w_co = w_co;
  row.weights.w_sem = w_sem;
  row.use_text = use_text;
  row.use_visual = use_visual;
  row.opc_enabled = opc;
  return row;
}

// Per-modality unit normalization keeps text and visual on equal footing in
// the frozen-content baseline regardless of their dimensions.
Mat content_only_rows(const Dataset& dataset) {
  const size_t d_text = dataset.d_text();
  const size_t d_visual = dataset.d_visual();
  Mat rows(dataset.videos.size(), d_text + d_visual);
  for (size_t i = 0; i < dataset.videos.size(); ++i) {
    const auto& v = dataset.videos[i];
    double nt = 0.0;
    for (double x : v.text_emb) nt += x * x;
    nt = std::sqrt(nt);
    double nv = 0.0;
    for (double x : v.visual_emb) nv += x * x;
    nv = std::sqrt(nv);
    double* out = rows.row(i);
    for (size_t c = 0; c < d_text; ++c) {
      out[c] = nt > 0.0 ? v.text_emb[c] / nt : 0.0;
    }
    for (size_t c = 0; c < d_visual; ++c) {
      out[d_text + c] = nv > 0.0 ? v.visual_emb[c] / nv : 0.0;
    }
  }
  return rows;
}

void append_metric(std::string& out, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  out += '\t';
  out += buf;
}

ordered_json metrics_json(const MetricsReport& m) {
  ordered_json j;
  j["k"] = m.k;
  j["recall_at_k"] = m.recall_at_k;
  j["topic_match_rate"] = m.topic_match_rate;
  j["mean_topic_overlap"] = m.mean_topic_overlap;
  j["popular_share"] = m.popular_share;
  j["buckets"]["popular"] = {{"recall_at_k", m.popular.recall_at_k},
                             {"topic_match_rate", m.popular.topic_match_rate}};
  j["buckets"]["unpopular"] = {{"recall_at_k", m.unpopular.recall_at_k},
                               {"topic_match_rate", m.unpopular.topic_match_rate}};
  j["buckets"]["all"] = {{"recall_at_k", m.all.recall_at_k},
                         {"topic_match_rate", m.all.topic_match_rate}};
  return j;
}

ordered_json model_json(const ModelConfig& c) {
  ordered_json j;
  j["d_id"] = c.d_id;
  j["d_out"] = c.d_out;
  j["use_text"] = c.use_text;
  j["use_visual"] = c.use_visual;
  j["init_scale"] = c.init_scale;
  j["d_text"] = c.d_text;
  j["d_visual"] = c.d_visual;
  j["activation"] = c.activation == Activation::kTanh ? "tanh" : "identity";
  return j;
}

ordered_json train_json(const TrainConfig& c) {
  ordered_json j;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  j["adam_beta1"] = c.adam_beta1;
  j["adam_beta2"] = c.adam_beta2;
  j["adam_epsilon"] = c.adam_epsilon;
  j["w_co"] = c.loss_weights.w_co;
  j["w_sem"] = c.loss_weights.w_sem;
  j["cosine_threshold"] = c.sem_config.cosine_threshold;
  j["opc_enabled"] = c.opc_enabled;
  j["seed"] = c.seed;
  return j;
}

ordered_json eval_json(const EvalConfig& c) {
  ordered_json j;
  j["k"] = c.k;
  j["popular_top_fraction"] = c.popular_top_fraction;
  j["unpopular_bottom_fraction"] = c.unpopular_bottom_fraction;
  return j;
}

ordered_json synth_json(const SynthConfig& c) {
  ordered_json j;
  j["n_videos"] = c.n_videos;
  j["n_topics"] = c.n_topics;
  j["d_text"] = c.d_text;
  j["d_visual"] = c.d_visual;
  j["zipf_exponent"] = c.zipf_exponent;
  j["cross_topic_noise"] = c.cross_topic_noise;
  j["content_noise"] = c.content_noise;
  j["n_pairs"] = c.n_pairs;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

std::vector<AblationRow> default_ablation_rows() {
  std::vector<AblationRow> rows;
  rows.push_back(trained_row("baseline_cf", "1:0", 1.0, 0.0, false, false, false));
  {
    AblationRow row;
    row.name = "content_only";
    row.ratio = "-";
    row.trained = false;
    rows.push_back(row);
  }
  rows.push_back(trained_row("mtl_1_1", "1:1", 1.0, 1.0, false, false, false));
  rows.push_back(trained_row("mtl_1_10", "1:10", 1.0, 10.0, false, false, false));
  rows.push_back(trained_row("mtl_1_100", "1:100", 1.0, 100.0, false, false, false));
  rows.push_back(trained_row("mtl_1_500", "1:500", 1.0, 500.0, false, false, false));
  rows.push_back(trained_row("mtl_1_1000", "1:1000", 1.0, 1000.0, false, false, false));
  rows.push_back(trained_row("mtl_multimodal_text", "1:500", 1.0, 500.0, true, false, false));
  rows.push_back(trained_row("mtl_multimodal_visual", "1:500", 1.0, 500.0, false, true, false));
  rows.push_back(trained_row("mtl_multimodal_both", "1:500", 1.0, 500.0, true, true, false));
  rows.push_back(trained_row("mtl_multimodal_opc", "1:500", 1.0, 500.0, true, true, true));
  return rows;
}

AblationReport run_ablation(const Dataset& dataset, const std::vector<AblationRow>& rows,
                            const ModelConfig& base_model, const TrainConfig& base_train,
                            const EvalConfig& eval_config, double holdout_fraction,
                            uint64_t split_seed) {
  validate_dataset(dataset, "ablation dataset");
  eval_config.validate();
  if (rows.empty()) {
    throw ValidationError("ablation: no rows requested");
  }

  const auto split = split_dataset(dataset, holdout_fraction, split_seed);
  const Dataset& train_set = split.first;
  const Dataset& eval_set = split.second;
  if (train_set.pairs.empty() || eval_set.pairs.empty()) {
    throw ValidationError("ablation: split produced an empty train or eval set");
  }
  const auto freq = build_frequency_table(train_set.pairs, dataset.videos.size());

  AblationReport report;
  report.base_model = base_model;
  report.base_train = base_train;
  report.eval_config = eval_config;
  report.holdout_fraction = holdout_fraction;
  report.split_seed = split_seed;
  report.n_videos = static_cast<int64_t>(dataset.videos.size());
  report.n_train_pairs = static_cast<int64_t>(train_set.pairs.size());
  report.n_eval_pairs = static_cast<int64_t>(eval_set.pairs.size());

  for (const auto& row : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    AblationRowResult result;
    result.row = row;

    EmbeddingIndex index;
    if (row.trained) {
      ModelConfig mcfg = base_model;
      mcfg.use_text = row.use_text;
      mcfg.use_visual = row.use_visual;
      mcfg.d_text = static_cast<int>(dataset.d_text());
      mcfg.d_visual = static_cast<int>(dataset.d_visual());
      TrainConfig tcfg = base_train;
      tcfg.loss_weights = row.weights;
      tcfg.opc_enabled = row.opc_enabled;
      auto trained = train(train_set, mcfg, tcfg);
      result.train_report = std::move(trained.second);
      index = build_index(trained.first, mcfg, dataset.videos);
    } else {
      index = index_from_rows(content_only_rows(dataset));
    }
    result.metrics = compute_metrics(index, dataset.videos, eval_set.pairs, freq, eval_config);
    result.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.rows.push_back(std::move(result));
  }
  return report;
}

std::string format_ablation_table(const AblationReport& report) {
  std::string out;
  char header[160];
  std::snprintf(header, sizeof(header), "# k=%d\tholdout=%.6f\tseed=%llu\n",
                report.eval_config.k, report.holdout_fraction,
                static_cast<unsigned long long>(report.split_seed));
  out += header;
  out +=
      "name\tratio\trecall_at_k\ttopic_match_rate\tmean_topic_overlap\tpopular_share\t"
      "recall_popular\ttm_popular\trecall_unpopular\ttm_unpopular\n";
  for (const auto& r : report.rows) {
    out += r.row.name;
    out += '\t';
    out += r.row.ratio;
    append_metric(out, r.metrics.recall_at_k);
    append_metric(out, r.metrics.topic_match_rate);
    append_metric(out, r.metrics.mean_topic_overlap);
    append_metric(out, r.metrics.popular_share);
    append_metric(out, r.metrics.popular.recall_at_k);
    append_metric(out, r.metrics.popular.topic_match_rate);
    append_metric(out, r.metrics.unpopular.recall_at_k);
    append_metric(out, r.metrics.unpopular.topic_match_rate);
    out += '\n';
  }
  return out;
}

std::string format_ablation_detail(const AblationReport& report) {
  ordered_json j;
  j["config"]["model"] = model_json(report.base_model);
  j["config"]["train"] = train_json(report.base_train);
  j["config"]["eval"] = eval_json(report.eval_config);
  j["config"]["holdout_fraction"] = report.holdout_fraction;
  j["config"]["split_seed"] = report.split_seed;
  j["config"]["n_videos"] = report.n_videos;
  j["config"]["n_train_pairs"] = report.n_train_pairs;
  j["config"]["n_eval_pairs"] = report.n_eval_pairs;
  j["rows"] = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["name"] = r.row.name;
    row["ratio"] = r.row.ratio;
    row["trained"] = r.row.trained;
    row["w_co"] = r.row.weights.w_co;
    row["w_sem"] = r.row.weights.w_sem;
    row["use_text"] = r.row.use_text;
    row["use_visual"] = r.row.use_visual;
    row["opc_enabled"] = r.row.opc_enabled;
    row["metrics"] = metrics_json(r.metrics);
    row["wall_clock_sec"] = r.wall_clock_sec;
    row["epochs"] = ordered_json::array();
    for (const auto& e : r.train_report.epochs) {
      ordered_json ej;
      ej["epoch"] = e.epoch;
      ej["mean_weighted_loss"] = e.mean_weighted_loss;
      ej["mean_l_co"] = e.mean_l_co;
      ej["mean_l_sem"] = e.mean_l_sem;
      ej["semantic_positive_fraction"] = e.semantic_positive_fraction;
      ej["wall_clock_sec"] = e.wall_clock_sec;
      row["epochs"].push_back(ej);
    }
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

std::string model_config_json(const ModelConfig& config) { return model_json(config).dump(); }
std::string train_config_json(const TrainConfig& config) { return train_json(config).dump(); }
std::string eval_config_json(const EvalConfig& config) { return eval_json(config).dump(); }
std::string synth_config_json(const SynthConfig& config) { return synth_json(config).dump(); }

ReferencePreset reference_preset() {
  ReferencePreset p;
  p.synth.n_videos = 2000;
  p.synth.n_topics = 20;
  p.synth.d_text = 4;
  p.synth.d_visual = 8;
  p.synth.zipf_exponent = 1.1;
  p.synth.cross_topic_noise = 0.3;
  p.synth.content_noise = 0.2;
  p.synth.n_pairs = 60000;
  p.synth.seed = 7;

  p.model.d_id = 16;
  p.model.d_out = 16;
  p.model.init_scale = 0.3;
  p.model.activation = Activation::kTanh;

  p.train.epochs = 1;
  p.train.batch_size = 2048;
  p.train.learning_rate = 0.006;
  p.train.adam_beta1 = 0.9;
  p.train.adam_beta2 = 0.999;
  // Deliberately coarse: at desk scale the popularity and reweighting
  // effects live in the early-training regime, and a large denominator
  // floor keeps step sizes sensitive to per-example loss scale.
  p.train.adam_epsilon = 3e-4;
  p.train.loss_weights.w_co = 1.0;
  p.train.loss_weights.w_sem = 500.0;
  p.train.sem_config.cosine_threshold = 0.8;
  p.train.opc_enabled = false;
  p.train.seed = 7;

  p.eval.k = 10;
  p.eval.popular_top_fraction = 0.01;
  p.eval.unpopular_bottom_fraction = 0.10;

  p.holdout_fraction = 0.1;
  return p;
}

}  // namespace relrec
