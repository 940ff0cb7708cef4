// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relrec/corpus.h"
#include "relrec/retrieval.h"

namespace relrec {

struct EvalConfig {
  int k = 10;
  double popular_top_fraction = 0.01;
  double unpopular_bottom_fraction = 0.10;

  void validate() const;
};

struct BucketMetrics {
  double recall_at_k = 0.0;
  double topic_match_rate = 0.0;
};

struct MetricsReport {
  int k = 10;
  double recall_at_k = 0.0;
  double topic_match_rate = 0.0;
  double mean_topic_overlap = 0.0;
  double popular_share = 0.0;
  BucketMetrics popular;    // triggers in the top popular_top_fraction by train frequency
  BucketMetrics unpopular;  // triggers in the bottom unpopular_bottom_fraction
  BucketMetrics all;
};

// Fraction of held-out pairs whose candidate appears in the trigger's top-k.
double recall_at_k(const EmbeddingIndex& index, const std::vector<InteractionPair>& eval_pairs,
                   int k);

// Over every (trigger, recommendation) slot from each trigger's top-k:
// first = fraction sharing at least one topic, second = mean Jaccard index
// of the topic sets.
std::pair<double, double> topic_relevance(const EmbeddingIndex& index,
                                          const std::vector<VideoRecord>& videos,
                                          const std::vector<int64_t>& trigger_set, int k);

// Fraction of recommended slots held by videos in the top popular_top_fraction
// of train-split trigger-frequency ranks (frequency ties cut by ascending id).
double popular_share(const EmbeddingIndex& index, const std::vector<int64_t>& trigger_set,
                     const FrequencyTable& freq, const EvalConfig& config, int k);

// All video ids ordered by (trigger frequency desc, id asc); the popularity
// rank list the bucket cuts and popular_share use.
std::vector<int64_t> popularity_order(const FrequencyTable& freq);

// Full report: headline metrics use every catalog video as a trigger;
// buckets cut the popularity order at the configured fractions.
MetricsReport compute_metrics(const EmbeddingIndex& index,
                              const std::vector<VideoRecord>& videos,
                              const std::vector<InteractionPair>& eval_pairs,
                              const FrequencyTable& freq, const EvalConfig& config);

// JSON serialization of a report plus the resolved run configuration.
std::string format_metrics_report(const MetricsReport& report,
                                  const std::string& resolved_config_json);

}  // namespace relrec
