// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relrec/corpus.h"
#include "relrec/mat.h"
#include "relrec/model.h"

namespace relrec {

// Immutable catalog of final embeddings, one row per video id, plus a
// fingerprint of the parameters/config that produced it.
struct EmbeddingIndex {
  Mat embeddings;  // N x d_out
  uint64_t fingerprint = 0;

  int64_t size() const { return static_cast<int64_t>(embeddings.rows); }
};

struct ScoredVideo {
  int64_t id = 0;
  double score = 0.0;
};

// Embeds every catalog video with the given parameters.
EmbeddingIndex build_index(const TowerParams& params, const ModelConfig& config,
                           const std::vector<VideoRecord>& videos);

// Index over raw row vectors (content-only baseline and tests).
EmbeddingIndex index_from_rows(Mat rows);

// Exact top-k by inner product against the trigger's embedding. The trigger
// itself is excluded; ties break toward the lower video id; scores are
// non-increasing. Returns fewer than k entries only when the catalog has
// fewer than k other videos.
std::vector<ScoredVideo> top_k(const EmbeddingIndex& index, int64_t trigger_id, int k);

// Index dump: magic, version, N, d_out, fingerprint, row-major doubles.
void dump_index(const EmbeddingIndex& index, const std::string& path);
EmbeddingIndex load_index(const std::string& path);

}  // namespace relrec
