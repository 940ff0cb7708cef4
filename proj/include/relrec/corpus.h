// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relrec {

struct VideoRecord {
  int64_t id = 0;
  std::vector<int> topics;
  std::vector<double> text_emb;
  std::vector<double> visual_emb;
};

struct InteractionPair {
  int64_t trigger = 0;
  int64_t candidate = 0;
};

struct Dataset {
  std::vector<VideoRecord> videos;  // indexed by id, ids are 0..N-1
  std::vector<InteractionPair> pairs;

  size_t n_videos() const { return videos.size(); }
  size_t d_text() const { return videos.empty() ? 0 : videos[0].text_emb.size(); }
  size_t d_visual() const { return videos.empty() ? 0 : videos[0].visual_emb.size(); }
};

// Trigger-side occurrence counts over a pair list. Ids never seen as a
// trigger have implicit count zero.
struct FrequencyTable {
  std::vector<int64_t> counts;
  int64_t total = 0;

  int64_t count(int64_t id) const {
    if (id < 0 || static_cast<size_t>(id) >= counts.size()) return 0;
    return counts[static_cast<size_t>(id)];
  }
};

// Thrown when an input file or dataset fails validation; message names the
// offending file/line/id.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown on filesystem-level failures (missing file, write failure).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads just the video catalog file (one JSON record per line) and
// validates the catalog invariants (contiguous ids in file order,
// non-empty topics, consistent embedding dimensions).
std::vector<VideoRecord> load_videos(const std::string& videos_path);

// Reads the two line-delimited record files described in README.md and
// validates all dataset invariants (contiguous ids, consistent embedding
// dimensions, non-empty topics, pair references, no self-pairs).
Dataset load_dataset(const std::string& videos_path, const std::string& interactions_path);

// Writes a dataset back in the same formats. Both writes are atomic
// (temp file + rename), so a failed run leaves no partial output.
void save_dataset(const Dataset& ds, const std::string& videos_path,
                  const std::string& interactions_path);

// Counts trigger occurrences. n_videos sizes the table; pass 0 to size it
// from the largest id seen.
FrequencyTable build_frequency_table(const std::vector<InteractionPair>& pairs,
                                     size_t n_videos = 0);

// Seeded disjoint split of the pair list; both halves keep the full video
// catalog. Eval gets floor(holdout_fraction * n) pairs; both halves keep
// their pairs in original relative order.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double holdout_fraction,
                                          uint64_t seed);

// Validates every Dataset invariant, throwing ValidationError with the
// first violation found. context prefixes the message.
void validate_dataset(const Dataset& ds, const std::string& context);

}  // namespace relrec
