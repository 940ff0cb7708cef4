// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "relrec/corpus.h"
#include "relrec/model.h"

namespace relrec {

// Relative task weights for the combined objective. w_sem scales the
// semantic-alignment term, w_co the co-engagement term.
struct LossWeights {
  double w_co = 1.0;
  double w_sem = 500.0;

  void validate() const;
};

// Threshold for the pseudo-label: a co-engaged pair counts as semantically
// aligned when the text-embedding cosine reaches the threshold (inclusive).
struct SemanticLabelConfig {
  double cosine_threshold = 0.8;

  void validate() const;
};

// Batch-level loss telemetry. l_co/l_sem are per-example means of the raw
// task losses; weighted_total is the mean of the fully weighted per-example
// objective (the quantity the optimizer descends).
struct LossBreakdown {
  double l_co = 0.0;
  double l_sem = 0.0;
  double weighted_total = 0.0;
  int64_t n_semantic_positives = 0;
};

// Gradients shaped like TowerParams. id_table rows untouched by the batch
// are exactly zero.
struct TowerGrads {
  Mat id_table;
  Mat fusion_weight;
  std::vector<double> fusion_bias;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// 1 iff the text-embedding cosine reaches the threshold. Callers pass
// co-engaged pairs; content embeddings are frozen so the label is fixed for
// a given pair and corpus.
int semantic_indicator(const VideoRecord& trigger, const VideoRecord& candidate,
                       const SemanticLabelConfig& config);

// exp(pos) / (exp(pos) + sum exp(negs)), max-shifted for overflow safety.
double sampled_softmax_prob(double pos_logit, const std::vector<double>& neg_logits);

// l_co = -log(prob); l_sem = indicator * l_co. Natural log.
std::pair<double, double> pair_losses(double prob, int indicator);

// w_i * (w_sem * l_sem + w_co * l_co).
double weighted_example_loss(double w_i, const LossWeights& weights, double l_sem,
                             double l_co);

// Forward + exact analytic backward over one batch with in-batch negatives:
// pair i scores its trigger against every candidate j in the batch, and the
// softmax for i treats j == i as the positive. example_weights aligns with
// batch (the trainer passes the inverse-log-frequency weights, or all ones).
// indicators, if given, must align with batch and match semantic_indicator
// on each pair; otherwise they are computed here.
std::pair<TowerGrads, LossBreakdown> batch_gradients(
    const TowerParams& params, const ModelConfig& config,
    const std::vector<VideoRecord>& videos, const std::vector<InteractionPair>& batch,
    const LossWeights& weights, const SemanticLabelConfig& sem_config,
    const std::vector<double>& example_weights,
    const std::vector<int>* indicators = nullptr);

// Loss-only evaluation of the same batch objective (used by finite-difference
// checks; shares the forward path with batch_gradients).
double batch_loss(const TowerParams& params, const ModelConfig& config,
                  const std::vector<VideoRecord>& videos,
                  const std::vector<InteractionPair>& batch, const LossWeights& weights,
                  const SemanticLabelConfig& sem_config,
                  const std::vector<double>& example_weights,
                  const std::vector<int>* indicators = nullptr);

}  // namespace relrec
