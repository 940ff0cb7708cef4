// SPDX-License-Identifier: Apache-2.0
#include "relrec/retrieval.h"

#include <algorithm>
#include <cstring>

#include "relrec/fsutil.h"

namespace relrec {

namespace {

constexpr char kMagic[8] = {'R', 'E', 'L', 'R', 'E', 'C', 'I', 'X'};
constexpr uint32_t kVersion = 1;

uint64_t fnv1a(const void* data, size_t n, uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

EmbeddingIndex build_index(const TowerParams& params, const ModelConfig& config,
                           const std::vector<VideoRecord>& videos) {
  config.validate();
  if (params.id_table.rows != videos.size())
    throw ValidationError("build_index: id table has " + std::to_string(params.id_table.rows) +
                          " rows but catalog has " + std::to_string(videos.size()));
  EmbeddingIndex idx;
  idx.embeddings.resize(videos.size(), static_cast<size_t>(config.d_out));
  for (size_t i = 0; i < videos.size(); ++i) {
    const std::vector<double> e = embed(params, config, videos[i]);
    std::copy(e.begin(), e.end(), idx.embeddings.row(i));
  }
  uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(params.id_table.a.data(), params.id_table.a.size() * sizeof(double), h);
  h = fnv1a(params.fusion_weight.a.data(), params.fusion_weight.a.size() * sizeof(double), h);
  h = fnv1a(params.fusion_bias.data(), params.fusion_bias.size() * sizeof(double), h);
  const uint64_t dims[2] = {static_cast<uint64_t>(config.d_id),
                            static_cast<uint64_t>(config.d_out)};
  h = fnv1a(dims, sizeof(dims), h);
  idx.fingerprint = h;
  return idx;
}

EmbeddingIndex index_from_rows(Mat rows) {
  EmbeddingIndex idx;
  idx.fingerprint = fnv1a(rows.a.data(), rows.a.size() * sizeof(double),
                          0xcbf29ce484222325ULL);
  idx.embeddings = std::move(rows);
  return idx;
}

std::vector<ScoredVideo> top_k(const EmbeddingIndex& index, int64_t trigger_id, int k) {
  const size_t n = index.embeddings.rows;
  if (trigger_id < 0 || static_cast<size_t>(trigger_id) >= n)
    throw ValidationError("top_k: trigger id " + std::to_string(trigger_id) +
                          " out of range [0, " + std::to_string(n) + ")");
  if (k < 1) throw ValidationError("top_k: k must be >= 1");
  const double* q = index.embeddings.row(static_cast<size_t>(trigger_id));
  const size_t d = index.embeddings.cols;
  std::vector<ScoredVideo> scored;
  scored.reserve(n > 0 ? n - 1 : 0);
  for (size_t j = 0; j < n; ++j) {
    if (static_cast<int64_t>(j) == trigger_id) continue;
    const double* r = index.embeddings.row(j);
    double s = 0.0;
    for (size_t c = 0; c < d; ++c) s += q[c] * r[c];
    scored.push_back({static_cast<int64_t>(j), s});
  }
  const auto better = [](const ScoredVideo& a, const ScoredVideo& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  const size_t kk = std::min<size_t>(static_cast<size_t>(k), scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(kk),
                    scored.end(), better);
  scored.resize(kk);
  return scored;
}

void dump_index(const EmbeddingIndex& index, const std::string& path) {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  const uint32_t version = kVersion;
  buf.append(reinterpret_cast<const char*>(&version), sizeof(version));
  const uint64_t n = index.embeddings.rows, d = index.embeddings.cols;
  buf.append(reinterpret_cast<const char*>(&n), sizeof(n));
  buf.append(reinterpret_cast<const char*>(&d), sizeof(d));
  buf.append(reinterpret_cast<const char*>(&index.fingerprint), sizeof(index.fingerprint));
  buf.append(reinterpret_cast<const char*>(index.embeddings.a.data()),
             index.embeddings.a.size() * sizeof(double));
  atomic_write_file(path, buf);
}

EmbeddingIndex load_index(const std::string& path) {
  const std::string buf = read_file(path);
  size_t off = 0;
  if (buf.size() < sizeof(kMagic) || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw ValidationError(path + ": not an index file (bad magic)");
  off = sizeof(kMagic);
  const auto need = [&](size_t bytes) {
    if (off + bytes > buf.size()) throw ValidationError(path + ": truncated index file");
  };
  uint32_t version = 0;
  need(sizeof(version));
  std::memcpy(&version, buf.data() + off, sizeof(version));
  off += sizeof(version);
  if (version != kVersion)
    throw ValidationError(path + ": unsupported index version " + std::to_string(version));
  uint64_t n = 0, d = 0;
  EmbeddingIndex idx;
  need(sizeof(n));
  std::memcpy(&n, buf.data() + off, sizeof(n));
  off += sizeof(n);
  need(sizeof(d));
  std::memcpy(&d, buf.data() + off, sizeof(d));
  off += sizeof(d);
  need(sizeof(idx.fingerprint));
  std::memcpy(&idx.fingerprint, buf.data() + off, sizeof(idx.fingerprint));
  off += sizeof(idx.fingerprint);
  idx.embeddings.resize(n, d);
  need(n * d * sizeof(double));
  std::memcpy(idx.embeddings.a.data(), buf.data() + off, n * d * sizeof(double));
  off += n * d * sizeof(double);
  if (off != buf.size()) throw ValidationError(path + ": trailing bytes after index payload");
  return idx;
}

}  // namespace relrec
