// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relrec/corpus.h"
#include "relrec/mat.h"

namespace relrec {

enum class Activation { kTanh, kIdentity };

// Shape and wiring of the shared-weight tower. d_text/d_visual mirror the
// corpus content dimensions and are required whenever the matching use_*
// flag is on; the dense-layer input width is d_id plus the enabled content
// widths.
struct ModelConfig {
  int d_id = 16;
  int d_out = 16;
  bool use_text = false;
  bool use_visual = false;
  double init_scale = 0.1;
  int d_text = 0;
  int d_visual = 0;
  Activation activation = Activation::kTanh;

  int d_in() const {
    return d_id + (use_text ? d_text : 0) + (use_visual ? d_visual : 0);
  }
  void validate() const;
};

// All trainable state. One parameter set serves both the trigger and the
// candidate side; content embeddings live in the corpus and are frozen.
struct TowerParams {
  Mat id_table;           // N x d_id
  Mat fusion_weight;      // d_in x d_out
  std::vector<double> fusion_bias;  // d_out

  bool all_finite() const;
};

// Uniform [-init_scale, +init_scale] entries from a seeded generator; the
// fill order (id_table, fusion_weight, fusion_bias) is part of the
// determinism contract.
TowerParams init_params(const ModelConfig& config, size_t n_videos, uint64_t seed);

// activation(concat[id_row || text || visual] . W + b) for one video.
std::vector<double> embed(const TowerParams& params, const ModelConfig& config,
                          const VideoRecord& video);

// Batched forward pass used by training: X holds one concatenated input row
// per id, S = X.W + b is the pre-activation, E the activation output.
struct ForwardPass {
  Mat x;  // B x d_in
  Mat s;  // B x d_out
  Mat e;  // B x d_out
};
ForwardPass forward_batch(const TowerParams& params, const ModelConfig& config,
                          const std::vector<VideoRecord>& videos,
                          const std::vector<int64_t>& ids);

// Versioned binary checkpoint: magic, version, flags, dimensions, then
// row-major double payloads. Load is the exact inverse of save.
void checkpoint_save(const TowerParams& params, const ModelConfig& config,
                     const std::string& path);
std::pair<TowerParams, ModelConfig> checkpoint_load(const std::string& path);

}  // namespace relrec
