// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relrec/corpus.h"
#include "relrec/eval.h"
#include "relrec/model.h"
#include "relrec/syngen.h"
#include "relrec/trainer.h"

namespace relrec {

struct AblationRow {
  std::string name;
  std::string ratio;  // printed as-is in the report table
  bool trained = true;
  LossWeights weights;
  bool use_text = false;
  bool use_visual = false;
  bool opc_enabled = false;
};

// The fixed sweep: co-engagement baseline, frozen-content baseline, the
// semantic weight ladder, the modality additions, and the propensity
// correction on top of both modalities.
std::vector<AblationRow> default_ablation_rows();

struct AblationRowResult {
  AblationRow row;
  MetricsReport metrics;
  TrainReport train_report;  // empty for untrained rows
  double wall_clock_sec = 0.0;
};

struct AblationReport {
  std::vector<AblationRowResult> rows;
  ModelConfig base_model;
  TrainConfig base_train;
  EvalConfig eval_config;
  double holdout_fraction = 0.0;
  uint64_t split_seed = 0;
  int64_t n_videos = 0;
  int64_t n_train_pairs = 0;
  int64_t n_eval_pairs = 0;
};

// Runs every row against one shared train/eval split of the dataset.
// Per-row model and train configs are the base configs with the row's
// modality flags, loss weights, and correction flag applied.
AblationReport run_ablation(const Dataset& dataset, const std::vector<AblationRow>& rows,
                            const ModelConfig& base_model, const TrainConfig& base_train,
                            const EvalConfig& eval_config, double holdout_fraction,
                            uint64_t split_seed);

// Tab-separated table, one line per row, fixed column order, %.6f metrics.
// Deterministic bytes for a given dataset and configuration.
std::string format_ablation_table(const AblationReport& report);

// JSON with per-row training curves and wall-clock times plus the resolved
// configuration. Not byte-stable across runs (timing fields).
std::string format_ablation_detail(const AblationReport& report);

std::string model_config_json(const ModelConfig& config);
std::string train_config_json(const TrainConfig& config);
std::string eval_config_json(const EvalConfig& config);
std::string synth_config_json(const SynthConfig& config);

struct ReferencePreset {
  SynthConfig synth;
  ModelConfig model;
  TrainConfig train;
  EvalConfig eval;
  double holdout_fraction = 0.1;
};

// The tuned desk-scale configuration the packaged ablation and the
// acceptance run both use.
ReferencePreset reference_preset();

}  // namespace relrec
