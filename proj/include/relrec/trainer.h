// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "relrec/corpus.h"
#include "relrec/model.h"
#include "relrec/objective.h"

namespace relrec {

struct TrainConfig {
  int epochs = 1;
  int batch_size = 256;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  LossWeights loss_weights;
  SemanticLabelConfig sem_config;
  bool opc_enabled = false;
  uint64_t seed = 7;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double mean_weighted_loss = 0.0;
  double mean_l_co = 0.0;
  double mean_l_sem = 0.0;
  double semantic_positive_fraction = 0.0;
  double wall_clock_sec = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
};

// 1 / ln(1 + freq): inverse log-frequency propensity weight for a training
// example, keyed by how often its trigger occurs in the training split.
double opc_weight(double freq);

// Full training loop: builds the trigger-frequency table from train_set,
// caches semantic indicators and per-example weights, then runs seeded
// shuffles, in-batch-negative gradient batches (a final batch smaller than
// 2 is dropped), and bias-corrected adaptive-moment updates. Deterministic
// given (train_set, configs, seed).
std::pair<TowerParams, TrainReport> train(const Dataset& train_set,
                                          const ModelConfig& model_config,
                                          const TrainConfig& train_config);

}  // namespace relrec
