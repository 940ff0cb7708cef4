// SPDX-License-Identifier: Apache-2.0
//
// relrec: synthetic-corpus generation, two-tower training, retrieval
// evaluation, the packaged ablation sweep, and ad-hoc recommendation.
// Exit codes: 0 success, 2 usage error, 3 input validation failure,
// 4 file I/O failure, 1 anything else.
#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relrec/ablation.h"
#include "relrec/corpus.h"
#include "relrec/eval.h"
#include "relrec/fsutil.h"
#include "relrec/log.h"
#include "relrec/model.h"
#include "relrec/retrieval.h"
#include "relrec/syngen.h"
#include "relrec/trainer.h"

namespace {

using nlohmann::ordered_json;
using namespace relrec;

void add_model_options(CLI::App* cmd, ModelConfig& model, std::string& activation,
                       bool with_modalities) {
  cmd->add_option("--d-id", model.d_id, "Id embedding width");
  cmd->add_option("--d-out", model.d_out, "Output embedding width");
  cmd->add_option("--init-scale", model.init_scale, "Uniform init half-range");
  cmd->add_option("--activation", activation, "Output activation")
      ->check(CLI::IsMember({"tanh", "identity"}));
  if (with_modalities) {
    cmd->add_flag("--use-text", model.use_text, "Fuse the text embedding");
    cmd->add_flag("--use-visual", model.use_visual, "Fuse the visual embedding");
  }
}

void add_optimizer_options(CLI::App* cmd, TrainConfig& tr) {
  cmd->add_option("--epochs", tr.epochs, "Training epochs");
  cmd->add_option("--batch-size", tr.batch_size, "Examples per batch");
  cmd->add_option("--learning-rate", tr.learning_rate, "Step size");
  cmd->add_option("--adam-beta1", tr.adam_beta1, "First-moment decay");
  cmd->add_option("--adam-beta2", tr.adam_beta2, "Second-moment decay");
  cmd->add_option("--adam-epsilon", tr.adam_epsilon, "Denominator floor");
  cmd->add_option("--cosine-threshold", tr.sem_config.cosine_threshold,
                  "Text-similarity threshold for the semantic label");
}

void add_eval_options(CLI::App* cmd, EvalConfig& ev) {
  cmd->add_option("--k", ev.k, "Recommendations per trigger");
  cmd->add_option("--popular-fraction", ev.popular_top_fraction,
                  "Top fraction of the popularity ranking counted as popular");
  cmd->add_option("--unpopular-fraction", ev.unpopular_bottom_fraction,
                  "Bottom fraction counted as unpopular");
}

void apply_activation(ModelConfig& model, const std::string& activation) {
  model.activation = activation == "identity" ? Activation::kIdentity : Activation::kTanh;
}

ordered_json split_config_json(double holdout, uint64_t split_seed) {
  ordered_json j;
  j["holdout_fraction"] = holdout;
  j["split_seed"] = split_seed;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Related-video retrieval toolkit"};
  app.require_subcommand(1);
  // Config files attach to the top-level parser; a [subcommand] section holds
  // that subcommand's options. Flags given on the command line win.
  app.set_config("--config", "", "INI file; sections name subcommands");

  // gen-data ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic corpus");
  SynthConfig syn;
  std::string videos_out;
  std::string pairs_out;
  gen->add_option("--videos-out", videos_out, "Video catalog output path")->required();
  gen->add_option("--pairs-out", pairs_out, "Interaction pair output path")->required();
  gen->add_option("--n-videos", syn.n_videos, "Catalog size");
  gen->add_option("--n-topics", syn.n_topics, "Topic count");
  gen->add_option("--d-text", syn.d_text, "Text embedding width");
  gen->add_option("--d-visual", syn.d_visual, "Visual embedding width");
  gen->add_option("--zipf-exponent", syn.zipf_exponent, "Popularity skew");
  gen->add_option("--cross-topic-noise", syn.cross_topic_noise,
                  "Probability a candidate ignores the trigger topic");
  gen->add_option("--content-noise", syn.content_noise, "Embedding noise sigma");
  gen->add_option("--n-pairs", syn.n_pairs, "Interaction pair count");
  gen->add_option("--seed", syn.seed, "Generator seed");
  gen->callback([&] {
    log_info("gen-data config: " + synth_config_json(syn));
    const Dataset ds = generate_corpus(syn);
    save_dataset(ds, videos_out, pairs_out);
    log_info("wrote " + std::to_string(ds.videos.size()) + " videos to " + videos_out + " and " +
             std::to_string(ds.pairs.size()) + " pairs to " + pairs_out);
  });

  // train ------------------------------------------------------------------
  auto* tr_cmd = app.add_subcommand("train", "Train the two-tower model");
  std::string tr_videos;
  std::string tr_pairs;
  std::string checkpoint_out;
  std::string index_out;
  std::string tr_report_out;
  ModelConfig tr_model;
  TrainConfig tr_train;
  std::string tr_activation = "tanh";
  double tr_holdout = 0.1;
  tr_cmd->add_option("--videos", tr_videos, "Video catalog path")->required();
  tr_cmd->add_option("--pairs", tr_pairs, "Interaction pair path")->required();
  tr_cmd->add_option("--checkpoint-out", checkpoint_out, "Checkpoint output path")->required();
  tr_cmd->add_option("--index-out", index_out, "Also dump the embedding index here");
  tr_cmd->add_option("--report-out", tr_report_out, "Training report JSON path");
  add_model_options(tr_cmd, tr_model, tr_activation, true);
  add_optimizer_options(tr_cmd, tr_train);
  tr_cmd->add_option("--w-co", tr_train.loss_weights.w_co, "Co-engagement loss weight");
  tr_cmd->add_option("--w-sem", tr_train.loss_weights.w_sem, "Semantic loss weight");
  tr_cmd->add_flag("--opc", tr_train.opc_enabled, "Inverse-propensity example weighting");
  tr_cmd->add_option("--seed", tr_train.seed, "Init/shuffle/split seed");
  tr_cmd->add_option("--holdout", tr_holdout,
                     "Held-out pair fraction excluded from training (0 trains on everything)");
  tr_cmd->callback([&] {
    const Dataset ds = load_dataset(tr_videos, tr_pairs);
    apply_activation(tr_model, tr_activation);
    tr_model.d_text = static_cast<int>(ds.d_text());
    tr_model.d_visual = static_cast<int>(ds.d_visual());
    const auto split = split_dataset(ds, tr_holdout, tr_train.seed);
    log_info("train config: " + model_config_json(tr_model) + " " + train_config_json(tr_train));
    log_info("training on " + std::to_string(split.first.pairs.size()) + " of " +
             std::to_string(ds.pairs.size()) + " pairs");
    const auto trained = train(split.first, tr_model, tr_train);
    checkpoint_save(trained.first, tr_model, checkpoint_out);
    log_info("wrote checkpoint to " + checkpoint_out);
    if (!index_out.empty()) {
      dump_index(build_index(trained.first, tr_model, ds.videos), index_out);
      log_info("wrote index to " + index_out);
    }
    if (!tr_report_out.empty()) {
      ordered_json j;
      j["config"]["model"] = ordered_json::parse(model_config_json(tr_model));
      j["config"]["train"] = ordered_json::parse(train_config_json(tr_train));
      j["config"]["split"] = split_config_json(tr_holdout, tr_train.seed);
      j["config"]["n_videos"] = ds.videos.size();
      j["config"]["n_train_pairs"] = split.first.pairs.size();
      j["epochs"] = ordered_json::array();
      for (const auto& e : trained.second.epochs) {
        j["epochs"].push_back({{"epoch", e.epoch},
                               {"mean_weighted_loss", e.mean_weighted_loss},
                               {"mean_l_co", e.mean_l_co},
                               {"mean_l_sem", e.mean_l_sem},
                               {"semantic_positive_fraction", e.semantic_positive_fraction},
                               {"wall_clock_sec", e.wall_clock_sec}});
      }
      atomic_write_file(tr_report_out, j.dump(2) + "\n");
      log_info("wrote training report to " + tr_report_out);
    }
  });

  // eval -------------------------------------------------------------------
  auto* ev_cmd = app.add_subcommand("eval", "Score a checkpoint or index against held-out pairs");
  std::string ev_videos;
  std::string ev_pairs;
  std::string ev_checkpoint;
  std::string ev_index;
  std::string ev_report_out;
  EvalConfig ev_cfg;
  double ev_holdout = 0.1;
  uint64_t ev_split_seed = 7;
  ev_cmd->add_option("--videos", ev_videos, "Video catalog path")->required();
  ev_cmd->add_option("--pairs", ev_pairs, "Interaction pair path")->required();
  auto* ck_opt = ev_cmd->add_option("--checkpoint", ev_checkpoint, "Checkpoint to embed with");
  auto* ix_opt = ev_cmd->add_option("--index", ev_index, "Pre-built embedding index");
  ck_opt->excludes(ix_opt);
  ix_opt->excludes(ck_opt);
  ev_cmd->add_option("--report-out", ev_report_out, "Metrics JSON path (default: stdout)");
  add_eval_options(ev_cmd, ev_cfg);
  ev_cmd->add_option("--holdout", ev_holdout, "Held-out pair fraction to score");
  ev_cmd->add_option("--split-seed", ev_split_seed, "Split seed (match the training run)");
  ev_cmd->callback([&] {
    if (ev_checkpoint.empty() && ev_index.empty()) {
      throw CLI::RequiredError("eval: --checkpoint or --index");
    }
    const Dataset ds = load_dataset(ev_videos, ev_pairs);
    const auto split = split_dataset(ds, ev_holdout, ev_split_seed);
    if (split.second.pairs.empty()) {
      throw ValidationError("eval: holdout fraction leaves no evaluation pairs");
    }
    const auto freq = build_frequency_table(split.first.pairs, ds.videos.size());
    EmbeddingIndex index;
    ordered_json source;
    if (!ev_checkpoint.empty()) {
      const auto loaded = checkpoint_load(ev_checkpoint);
      index = build_index(loaded.first, loaded.second, ds.videos);
      source["checkpoint"] = ev_checkpoint;
      source["model"] = ordered_json::parse(model_config_json(loaded.second));
    } else {
      index = load_index(ev_index);
      if (index.size() != static_cast<int64_t>(ds.videos.size())) {
        throw ValidationError("eval: index holds " + std::to_string(index.size()) +
                              " rows but catalog has " + std::to_string(ds.videos.size()));
      }
      source["index"] = ev_index;
    }
    const MetricsReport report = compute_metrics(index, ds.videos, split.second.pairs, freq, ev_cfg);
    ordered_json cfg;
    cfg["source"] = source;
    cfg["eval"] = ordered_json::parse(eval_config_json(ev_cfg));
    cfg["split"] = split_config_json(ev_holdout, ev_split_seed);
    cfg["n_videos"] = ds.videos.size();
    cfg["n_eval_pairs"] = split.second.pairs.size();
    const std::string out = format_metrics_report(report, cfg.dump());
    if (ev_report_out.empty()) {
      std::fputs(out.c_str(), stdout);
    } else {
      atomic_write_file(ev_report_out, out);
      log_info("wrote metrics to " + ev_report_out);
    }
  });

  // ablate -----------------------------------------------------------------
  auto* ab_cmd = app.add_subcommand("ablate", "Run the fixed ablation sweep");
  std::string ab_videos;
  std::string ab_pairs;
  std::string table_out;
  std::string detail_out;
  const ReferencePreset preset = reference_preset();
  ModelConfig ab_model = preset.model;
  TrainConfig ab_train = preset.train;
  EvalConfig ab_eval = preset.eval;
  std::string ab_activation = "tanh";
  double ab_holdout = preset.holdout_fraction;
  ab_cmd->add_option("--videos", ab_videos, "Video catalog path")->required();
  ab_cmd->add_option("--pairs", ab_pairs, "Interaction pair path")->required();
  ab_cmd->add_option("--table-out", table_out, "Ablation table output path")->required();
  ab_cmd->add_option("--detail-out", detail_out, "Per-row detail JSON path");
  add_model_options(ab_cmd, ab_model, ab_activation, false);
  add_optimizer_options(ab_cmd, ab_train);
  ab_cmd->add_option("--seed", ab_train.seed, "Split/init/shuffle seed");
  ab_cmd->add_option("--holdout", ab_holdout, "Held-out pair fraction");
  add_eval_options(ab_cmd, ab_eval);
  ab_cmd->callback([&] {
    const Dataset ds = load_dataset(ab_videos, ab_pairs);
    apply_activation(ab_model, ab_activation);
    log_info("ablate config: " + model_config_json(ab_model) + " " + train_config_json(ab_train));
    const AblationReport report = run_ablation(ds, default_ablation_rows(), ab_model, ab_train,
                                               ab_eval, ab_holdout, ab_train.seed);
    atomic_write_file(table_out, format_ablation_table(report));
    log_info("wrote ablation table to " + table_out);
    if (!detail_out.empty()) {
      atomic_write_file(detail_out, format_ablation_detail(report));
      log_info("wrote ablation detail to " + detail_out);
    }
  });

  // recommend --------------------------------------------------------------
  auto* rec_cmd = app.add_subcommand("recommend", "Print top-k related videos for a trigger");
  std::string rec_videos;
  std::string rec_checkpoint;
  std::string rec_index;
  int64_t trigger_id = 0;
  int rec_k = 10;
  rec_cmd->add_option("--videos", rec_videos, "Video catalog path (required with --checkpoint)");
  auto* rck = rec_cmd->add_option("--checkpoint", rec_checkpoint, "Checkpoint to embed with");
  auto* rix = rec_cmd->add_option("--index", rec_index, "Pre-built embedding index");
  rck->excludes(rix);
  rix->excludes(rck);
  rec_cmd->add_option("--trigger", trigger_id, "Trigger video id")->required();
  rec_cmd->add_option("--k", rec_k, "Recommendation count");
  rec_cmd->callback([&] {
    EmbeddingIndex index;
    if (!rec_checkpoint.empty()) {
      if (rec_videos.empty()) {
        throw CLI::RequiresError("--checkpoint", "--videos");
      }
      const auto videos = load_videos(rec_videos);
      const auto loaded = checkpoint_load(rec_checkpoint);
      index = build_index(loaded.first, loaded.second, videos);
    } else if (!rec_index.empty()) {
      index = load_index(rec_index);
    } else {
      throw CLI::RequiredError("recommend: --checkpoint or --index");
    }
    log_info("recommend: trigger " + std::to_string(trigger_id) + ", k " + std::to_string(rec_k));
    for (const auto& sv : top_k(index, trigger_id, rec_k)) {
      std::printf("%lld\t%.6f\n", static_cast<long long>(sv.id), sv.score);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    log_error(e.what());
    return 3;
  } catch (const IoError& e) {
    log_error(e.what());
    return 4;
  } catch (const std::exception& e) {
    log_error(e.what());
    return 1;
  }
  return 0;
}
