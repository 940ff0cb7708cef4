// SPDX-License-Identifier: Apache-2.0
#include "relrec/trainer.h"

#include <chrono>
#include <cmath>
#include <string>

#include "relrec/rng.h"

namespace relrec {

void TrainConfig::validate() const {
  if (epochs < 1) throw ValidationError("train: epochs must be >= 1");
  if (batch_size < 2) throw ValidationError("train: batch_size must be >= 2");
  if (!(learning_rate > 0.0)) throw ValidationError("train: learning_rate must be > 0");
  if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0) || !(adam_beta2 > 0.0 && adam_beta2 < 1.0))
    throw ValidationError("train: betas must lie in (0, 1)");
  if (!(adam_epsilon > 0.0)) throw ValidationError("train: adam_epsilon must be > 0");
  loss_weights.validate();
  sem_config.validate();
}

double opc_weight(double freq) {
  if (!(freq >= 1.0)) throw ValidationError("opc_weight: freq must be >= 1");
  return 1.0 / std::log(1.0 + freq);
}

namespace {

// Bias-corrected adaptive-moment update over one flat parameter array.
struct AdamState {
  std::vector<double> m, v;

  void init(size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
  }
  void update(double* p, const double* g, size_t n, const TrainConfig& cfg, int64_t t) {
    const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (size_t i = 0; i < n; ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_epsilon);
    }
  }
};

}  // namespace

std::pair<TowerParams, TrainReport> train(const Dataset& train_set,
                                          const ModelConfig& model_config,
                                          const TrainConfig& train_config) {
  train_config.validate();
  model_config.validate();
  if (train_set.pairs.empty()) throw ValidationError("train: empty training set");
  if (static_cast<size_t>(train_config.batch_size) > train_set.pairs.size())
    throw ValidationError("train: batch_size exceeds number of training pairs");

  const size_t n_pairs = train_set.pairs.size();
  const FrequencyTable freq = build_frequency_table(train_set.pairs, train_set.n_videos());

  // Content embeddings are frozen, so both the semantic indicator and the
  // propensity weight of every pair are fixed; compute them once.
  std::vector<int> indicators(n_pairs);
  std::vector<double> ex_weights(n_pairs);
  for (size_t i = 0; i < n_pairs; ++i) {
    const InteractionPair& p = train_set.pairs[i];
    indicators[i] =
        semantic_indicator(train_set.videos[static_cast<size_t>(p.trigger)],
                           train_set.videos[static_cast<size_t>(p.candidate)],
                           train_config.sem_config);
    ex_weights[i] = train_config.opc_enabled
                        ? opc_weight(static_cast<double>(freq.count(p.trigger)))
                        : 1.0;
  }

  TowerParams params = init_params(model_config, train_set.n_videos(), train_config.seed);
  AdamState adam_id, adam_w, adam_b;
  adam_id.init(params.id_table.size());
  adam_w.init(params.fusion_weight.size());
  adam_b.init(params.fusion_bias.size());

  Rng shuffle_rng(train_config.seed + 1);
  std::vector<size_t> order(n_pairs);
  for (size_t i = 0; i < n_pairs; ++i) order[i] = i;

  TrainReport report;
  int64_t step = 0;
  for (int epoch = 0; epoch < train_config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    shuffle_rng.shuffle(order);
    double sum_weighted = 0.0, sum_lco = 0.0, sum_lsem = 0.0;
    int64_t sum_sem = 0, n_seen = 0;
    for (size_t start = 0; start < n_pairs; start += train_config.batch_size) {
      const size_t end = std::min(n_pairs, start + train_config.batch_size);
      const size_t b = end - start;
      if (b < 2) break;
      std::vector<InteractionPair> batch(b);
      std::vector<double> w(b);
      std::vector<int> ind(b);
      for (size_t i = 0; i < b; ++i) {
        const size_t src = order[start + i];
        batch[i] = train_set.pairs[src];
        w[i] = ex_weights[src];
        ind[i] = indicators[src];
      }
      auto [grads, stats] = batch_gradients(params, model_config, train_set.videos, batch,
                                            train_config.loss_weights,
                                            train_config.sem_config, w, &ind);
      if (!std::isfinite(stats.weighted_total))
        throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch) +
                                 ", batch starting at " + std::to_string(start));
      ++step;
      adam_id.update(params.id_table.a.data(), grads.id_table.a.data(),
                     params.id_table.size(), train_config, step);
      adam_w.update(params.fusion_weight.a.data(), grads.fusion_weight.a.data(),
                    params.fusion_weight.size(), train_config, step);
      adam_b.update(params.fusion_bias.data(), grads.fusion_bias.data(),
                    params.fusion_bias.size(), train_config, step);
      sum_weighted += stats.weighted_total * static_cast<double>(b);
      sum_lco += stats.l_co * static_cast<double>(b);
      sum_lsem += stats.l_sem * static_cast<double>(b);
      sum_sem += stats.n_semantic_positives;
      n_seen += static_cast<int64_t>(b);
    }
    if (!params.all_finite())
      throw std::runtime_error("train: non-finite parameters after epoch " +
                               std::to_string(epoch));
    EpochStats es;
    es.epoch = epoch;
    const double inv = n_seen > 0 ? 1.0 / static_cast<double>(n_seen) : 0.0;
    es.mean_weighted_loss = sum_weighted * inv;
    es.mean_l_co = sum_lco * inv;
    es.mean_l_sem = sum_lsem * inv;
    es.semantic_positive_fraction = static_cast<double>(sum_sem) * inv;
    es.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.epochs.push_back(es);
  }
  return {std::move(params), std::move(report)};
}

}  // namespace relrec
