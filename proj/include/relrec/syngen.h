// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "relrec/corpus.h"

namespace relrec {

// Knobs for the synthetic corpus generator.
//   zipf_exponent    popularity skew s; video at popularity rank r (0-based)
//                    is drawn with weight (r+1)^-s, so s=0 is uniform.
//   cross_topic_noise  probability eta that a pair's candidate is drawn from
//                    the whole catalog instead of the trigger's topic.
//   content_noise    per-coordinate sigma around the topic centroid.
struct SynthConfig {
  int64_t n_videos = 2000;
  int n_topics = 20;
  int d_text = 4;
  int d_visual = 8;
  double zipf_exponent = 1.1;
  double cross_topic_noise = 0.3;
  double content_noise = 0.2;
  int64_t n_pairs = 60000;
  uint64_t seed = 7;

  void validate() const;
};

// Deterministic synthetic corpus:
//  - each video gets one topic, uniformly;
//  - per topic, unit-norm centroids are drawn independently for the text
//    and visual modalities; each video's embedding is its centroid plus
//    N(0, sigma^2) per coordinate, re-normalized to unit length;
//  - a popularity rank permutation is drawn and rank r gets weight (r+1)^-s;
//  - each pair draws a trigger from the popularity distribution, then a
//    popularity-weighted candidate from the trigger's topic (probability
//    1-eta) or the whole catalog (probability eta), resampling until the
//    candidate differs from the trigger. Topics with a single video fall
//    back to the catalog-wide draw.
Dataset generate_corpus(const SynthConfig& config);

}  // namespace relrec
