// SPDX-License-Identifier: Apache-2.0
#include "relrec/objective.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace relrec {

void LossWeights::validate() const {
  if (w_co < 0.0 || w_sem < 0.0) throw ValidationError("loss weights must be >= 0");
  if (w_co == 0.0 && w_sem == 0.0) throw ValidationError("loss weights cannot both be zero");
}

void SemanticLabelConfig::validate() const {
  if (cosine_threshold < -1.0 || cosine_threshold > 1.0)
    throw ValidationError("cosine_threshold must be in [-1, 1]");
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw ValidationError("cosine_similarity: dimension mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0))
    throw ValidationError("cosine_similarity: zero-norm input");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

int semantic_indicator(const VideoRecord& trigger, const VideoRecord& candidate,
                       const SemanticLabelConfig& config) {
  config.validate();
  return cosine_similarity(trigger.text_emb, candidate.text_emb) >= config.cosine_threshold
             ? 1
             : 0;
}

double sampled_softmax_prob(double pos_logit, const std::vector<double>& neg_logits) {
  if (neg_logits.empty())
    throw ValidationError("sampled_softmax_prob: needs at least one negative logit");
  double m = pos_logit;
  for (double z : neg_logits) m = std::max(m, z);
  double denom = std::exp(pos_logit - m);
  const double num = denom;
  for (double z : neg_logits) denom += std::exp(z - m);
  return num / denom;
}

std::pair<double, double> pair_losses(double prob, int indicator) {
  if (!(prob > 0.0 && prob < 1.0))
    throw ValidationError("pair_losses: probability must lie in (0, 1)");
  const double l_co = -std::log(prob);
  return {l_co, indicator ? l_co : 0.0};
}

double weighted_example_loss(double w_i, const LossWeights& weights, double l_sem,
                             double l_co) {
  if (!(w_i > 0.0)) throw ValidationError("weighted_example_loss: w_i must be > 0");
  return w_i * (weights.w_sem * l_sem + weights.w_co * l_co);
}

namespace {

struct BatchForward {
  ForwardPass trig;
  ForwardPass cand;
  Mat logits;  // B x B, row i = trigger i against every candidate
  Mat probs;   // row-softmax of logits
  std::vector<int> ind;
  LossBreakdown stats;
};

BatchForward run_forward(const TowerParams& params, const ModelConfig& config,
                         const std::vector<VideoRecord>& videos,
                         const std::vector<InteractionPair>& batch,
                         const LossWeights& weights, const SemanticLabelConfig& sem_config,
                         const std::vector<double>& example_weights,
                         const std::vector<int>* indicators) {
  const size_t b = batch.size();
  if (b < 2)
    throw ValidationError("batch_gradients: batch size must be >= 2 for in-batch negatives");
  if (example_weights.size() != b)
    throw ValidationError("batch_gradients: example_weights size mismatch");
  weights.validate();
  sem_config.validate();

  BatchForward f;
  if (indicators) {
    if (indicators->size() != b)
      throw ValidationError("batch_gradients: indicators size mismatch");
    f.ind = *indicators;
  } else {
    f.ind.resize(b);
    for (size_t i = 0; i < b; ++i)
      f.ind[i] = semantic_indicator(videos[static_cast<size_t>(batch[i].trigger)],
                                    videos[static_cast<size_t>(batch[i].candidate)],
                                    sem_config);
  }

  std::vector<int64_t> trig_ids(b), cand_ids(b);
  for (size_t i = 0; i < b; ++i) {
    trig_ids[i] = batch[i].trigger;
    cand_ids[i] = batch[i].candidate;
  }
  f.trig = forward_batch(params, config, videos, trig_ids);
  f.cand = forward_batch(params, config, videos, cand_ids);
  matmul_nt(f.trig.e, f.cand.e, f.logits);

  f.probs.resize(b, b);
  double sum_lco = 0.0, sum_lsem = 0.0, sum_weighted = 0.0;
  for (size_t i = 0; i < b; ++i) {
    const double* z = f.logits.row(i);
    double m = z[0];
    for (size_t j = 1; j < b; ++j) m = std::max(m, z[j]);
    double denom = 0.0;
    double* p = f.probs.row(i);
    for (size_t j = 0; j < b; ++j) {
      p[j] = std::exp(z[j] - m);
      denom += p[j];
    }
    for (size_t j = 0; j < b; ++j) p[j] /= denom;
    const double l_co = -(z[i] - m - std::log(denom));
    const double l_sem = f.ind[i] ? l_co : 0.0;
    sum_lco += l_co;
    sum_lsem += l_sem;
    sum_weighted += weighted_example_loss(example_weights[i], weights, l_sem, l_co);
    f.stats.n_semantic_positives += f.ind[i];
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  f.stats.l_co = sum_lco * inv_b;
  f.stats.l_sem = sum_lsem * inv_b;
  f.stats.weighted_total = sum_weighted * inv_b;
  return f;
}

}  // namespace

std::pair<TowerGrads, LossBreakdown> batch_gradients(
    const TowerParams& params, const ModelConfig& config,
    const std::vector<VideoRecord>& videos, const std::vector<InteractionPair>& batch,
    const LossWeights& weights, const SemanticLabelConfig& sem_config,
    const std::vector<double>& example_weights, const std::vector<int>* indicators) {
  BatchForward f = run_forward(params, config, videos, batch, weights, sem_config,
                               example_weights, indicators);
  const size_t b = batch.size();
  const size_t d_out = static_cast<size_t>(config.d_out);
  const size_t d_id = static_cast<size_t>(config.d_id);

  // d(loss)/d(logit_ij) = a_i * (P_ij - [i==j]) with a_i the example's total
  // weight divided by the batch size (batch loss is a mean).
  Mat g(b, b);
  for (size_t i = 0; i < b; ++i) {
    const double a_i = example_weights[i] *
                       (weights.w_co + weights.w_sem * (f.ind[i] ? 1.0 : 0.0)) /
                       static_cast<double>(b);
    const double* p = f.probs.row(i);
    double* gi = g.row(i);
    for (size_t j = 0; j < b; ++j) gi[j] = a_i * (p[j] - (i == j ? 1.0 : 0.0));
  }

  Mat d_etrig, d_ecand;
  matmul_nn(g, f.cand.e, d_etrig);  // B x d_out
  matmul_tn(g, f.trig.e, d_ecand);  // B x d_out

  // Through the activation: tanh'(s) = 1 - e^2; identity' = 1.
  const bool tanh_act = config.activation == Activation::kTanh;
  Mat d_strig = d_etrig, d_scand = d_ecand;
  if (tanh_act) {
    for (size_t i = 0; i < d_strig.size(); ++i)
      d_strig.a[i] *= 1.0 - f.trig.e.a[i] * f.trig.e.a[i];
    for (size_t i = 0; i < d_scand.size(); ++i)
      d_scand.a[i] *= 1.0 - f.cand.e.a[i] * f.cand.e.a[i];
  }

  TowerGrads grads;
  grads.fusion_weight.resize(params.fusion_weight.rows, params.fusion_weight.cols);
  Mat dw_part;
  matmul_tn(f.trig.x, d_strig, grads.fusion_weight);
  matmul_tn(f.cand.x, d_scand, dw_part);
  for (size_t i = 0; i < grads.fusion_weight.size(); ++i)
    grads.fusion_weight.a[i] += dw_part.a[i];

  grads.fusion_bias.assign(d_out, 0.0);
  for (size_t i = 0; i < b; ++i)
    for (size_t j = 0; j < d_out; ++j)
      grads.fusion_bias[j] += d_strig.at(i, j) + d_scand.at(i, j);

  // Input gradients; only the id-embedding slice reaches trainable state.
  Mat d_xtrig, d_xcand;
  matmul_nt(d_strig, params.fusion_weight, d_xtrig);  // B x d_in
  matmul_nt(d_scand, params.fusion_weight, d_xcand);
  grads.id_table.resize(params.id_table.rows, params.id_table.cols);
  for (size_t i = 0; i < b; ++i) {
    double* rt = grads.id_table.row(static_cast<size_t>(batch[i].trigger));
    const double* xt = d_xtrig.row(i);
    for (size_t k = 0; k < d_id; ++k) rt[k] += xt[k];
    double* rc = grads.id_table.row(static_cast<size_t>(batch[i].candidate));
    const double* xc = d_xcand.row(i);
    for (size_t k = 0; k < d_id; ++k) rc[k] += xc[k];
  }
  return {std::move(grads), f.stats};
}

double batch_loss(const TowerParams& params, const ModelConfig& config,
                  const std::vector<VideoRecord>& videos,
                  const std::vector<InteractionPair>& batch, const LossWeights& weights,
                  const SemanticLabelConfig& sem_config,
                  const std::vector<double>& example_weights,
                  const std::vector<int>* indicators) {
  return run_forward(params, config, videos, batch, weights, sem_config, example_weights,
                     indicators)
      .stats.weighted_total;
}

}  // namespace relrec
