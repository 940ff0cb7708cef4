// SPDX-License-Identifier: Apache-2.0
#include "relrec/model.h"

#include <cmath>
#include <cstring>

#include "relrec/fsutil.h"
#include "relrec/rng.h"

namespace relrec {

namespace {

constexpr char kMagic[8] = {'R', 'E', 'L', 'R', 'E', 'C', 'C', 'K'};
constexpr uint32_t kVersion = 1;

constexpr uint32_t kFlagText = 1u << 0;
constexpr uint32_t kFlagVisual = 1u << 1;
constexpr uint32_t kFlagIdentity = 1u << 2;

void append_raw(std::string& buf, const void* p, size_t n) {
  buf.append(static_cast<const char*>(p), n);
}

template <class T>
void append_val(std::string& buf, T v) {
  append_raw(buf, &v, sizeof(v));
}

template <class T>
T read_val(const std::string& buf, size_t& off, const std::string& path) {
  if (off + sizeof(T) > buf.size())
    throw ValidationError(path + ": truncated checkpoint (header)");
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

void read_doubles(const std::string& buf, size_t& off, double* out, size_t n,
                  const std::string& path) {
  const size_t bytes = n * sizeof(double);
  if (off + bytes > buf.size())
    throw ValidationError(path + ": truncated checkpoint (payload shorter than header promises)");
  std::memcpy(out, buf.data() + off, bytes);
  off += bytes;
}

}  // namespace

void ModelConfig::validate() const {
  if (d_id < 1 || d_out < 1) throw ValidationError("model: d_id and d_out must be >= 1");
  if (!(init_scale > 0.0)) throw ValidationError("model: init_scale must be > 0");
  if (use_text && d_text < 1)
    throw ValidationError("model: use_text requires the corpus text dimension");
  if (use_visual && d_visual < 1)
    throw ValidationError("model: use_visual requires the corpus visual dimension");
}

bool TowerParams::all_finite() const {
  for (double v : id_table.a)
    if (!std::isfinite(v)) return false;
  for (double v : fusion_weight.a)
    if (!std::isfinite(v)) return false;
  for (double v : fusion_bias)
    if (!std::isfinite(v)) return false;
  return true;
}

TowerParams init_params(const ModelConfig& config, size_t n_videos, uint64_t seed) {
  config.validate();
  if (n_videos < 1) throw ValidationError("model: n_videos must be >= 1");
  Rng rng(seed);
  const double s = config.init_scale;
  TowerParams p;
  p.id_table.resize(n_videos, static_cast<size_t>(config.d_id));
  for (double& v : p.id_table.a) v = rng.uniform(-s, s);
  p.fusion_weight.resize(static_cast<size_t>(config.d_in()),
                         static_cast<size_t>(config.d_out));
  for (double& v : p.fusion_weight.a) v = rng.uniform(-s, s);
  p.fusion_bias.resize(static_cast<size_t>(config.d_out));
  for (double& v : p.fusion_bias) v = rng.uniform(-s, s);
  return p;
}

ForwardPass forward_batch(const TowerParams& params, const ModelConfig& config,
                          const std::vector<VideoRecord>& videos,
                          const std::vector<int64_t>& ids) {
  const size_t d_in = static_cast<size_t>(config.d_in());
  const size_t d_out = static_cast<size_t>(config.d_out);
  ForwardPass f;
  f.x.resize(ids.size(), d_in);
  for (size_t i = 0; i < ids.size(); ++i) {
    const int64_t id = ids[i];
    if (id < 0 || static_cast<size_t>(id) >= params.id_table.rows)
      throw ValidationError("embed: video id " + std::to_string(id) + " out of range");
    double* x = f.x.row(i);
    size_t off = 0;
    const double* idrow = params.id_table.row(static_cast<size_t>(id));
    for (int k = 0; k < config.d_id; ++k) x[off++] = idrow[k];
    const VideoRecord& v = videos[static_cast<size_t>(id)];
    if (config.use_text) {
      if (v.text_emb.size() != static_cast<size_t>(config.d_text))
        throw ValidationError("embed: text dimension mismatch for id " + std::to_string(id));
      for (double e : v.text_emb) x[off++] = e;
    }
    if (config.use_visual) {
      if (v.visual_emb.size() != static_cast<size_t>(config.d_visual))
        throw ValidationError("embed: visual dimension mismatch for id " + std::to_string(id));
      for (double e : v.visual_emb) x[off++] = e;
    }
  }
  matmul_nn(f.x, params.fusion_weight, f.s);
  for (size_t i = 0; i < f.s.rows; ++i) {
    double* s = f.s.row(i);
    for (size_t j = 0; j < d_out; ++j) s[j] += params.fusion_bias[j];
  }
  f.e = f.s;
  if (config.activation == Activation::kTanh)
    for (double& v : f.e.a) v = std::tanh(v);
  return f;
}

std::vector<double> embed(const TowerParams& params, const ModelConfig& config,
                          const VideoRecord& video) {
  const size_t d_out = static_cast<size_t>(config.d_out);
  const size_t d_in = static_cast<size_t>(config.d_in());
  if (video.id < 0 || static_cast<size_t>(video.id) >= params.id_table.rows)
    throw ValidationError("embed: video id " + std::to_string(video.id) + " out of range");
  std::vector<double> x(d_in);
  size_t off = 0;
  const double* idrow = params.id_table.row(static_cast<size_t>(video.id));
  for (int k = 0; k < config.d_id; ++k) x[off++] = idrow[k];
  if (config.use_text) {
    if (video.text_emb.size() != static_cast<size_t>(config.d_text))
      throw ValidationError("embed: text dimension mismatch for id " + std::to_string(video.id));
    for (double e : video.text_emb) x[off++] = e;
  }
  if (config.use_visual) {
    if (video.visual_emb.size() != static_cast<size_t>(config.d_visual))
      throw ValidationError("embed: visual dimension mismatch for id " +
                            std::to_string(video.id));
    for (double e : video.visual_emb) x[off++] = e;
  }
  std::vector<double> out(d_out);
  // Same accumulation order as forward_batch (products in ascending k, bias
  // last) so single-video and batched embeddings agree bit for bit.
  for (size_t j = 0; j < d_out; ++j) {
    double s = 0.0;
    for (size_t k = 0; k < d_in; ++k) s += x[k] * params.fusion_weight.at(k, j);
    s += params.fusion_bias[j];
    out[j] = config.activation == Activation::kTanh ? std::tanh(s) : s;
  }
  return out;
}

void checkpoint_save(const TowerParams& params, const ModelConfig& config,
                     const std::string& path) {
  std::string buf;
  append_raw(buf, kMagic, sizeof(kMagic));
  append_val<uint32_t>(buf, kVersion);
  uint32_t flags = 0;
  if (config.use_text) flags |= kFlagText;
  if (config.use_visual) flags |= kFlagVisual;
  if (config.activation == Activation::kIdentity) flags |= kFlagIdentity;
  append_val<uint32_t>(buf, flags);
  append_val<uint64_t>(buf, params.id_table.rows);
  append_val<uint64_t>(buf, static_cast<uint64_t>(config.d_id));
  append_val<uint64_t>(buf, static_cast<uint64_t>(config.d_text));
  append_val<uint64_t>(buf, static_cast<uint64_t>(config.d_visual));
  append_val<uint64_t>(buf, static_cast<uint64_t>(config.d_out));
  append_val<double>(buf, config.init_scale);
  append_raw(buf, params.id_table.a.data(), params.id_table.a.size() * sizeof(double));
  append_raw(buf, params.fusion_weight.a.data(),
             params.fusion_weight.a.size() * sizeof(double));
  append_raw(buf, params.fusion_bias.data(), params.fusion_bias.size() * sizeof(double));
  atomic_write_file(path, buf);
}

std::pair<TowerParams, ModelConfig> checkpoint_load(const std::string& path) {
  const std::string buf = read_file(path);
  size_t off = 0;
  if (buf.size() < sizeof(kMagic) || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw ValidationError(path + ": not a checkpoint file (bad magic)");
  off = sizeof(kMagic);
  const auto version = read_val<uint32_t>(buf, off, path);
  if (version != kVersion)
    throw ValidationError(path + ": unsupported checkpoint version " + std::to_string(version));
  const auto flags = read_val<uint32_t>(buf, off, path);
  const auto n = read_val<uint64_t>(buf, off, path);
  const auto d_id = read_val<uint64_t>(buf, off, path);
  const auto d_text = read_val<uint64_t>(buf, off, path);
  const auto d_visual = read_val<uint64_t>(buf, off, path);
  const auto d_out = read_val<uint64_t>(buf, off, path);
  const auto init_scale = read_val<double>(buf, off, path);

  ModelConfig config;
  config.d_id = static_cast<int>(d_id);
  config.d_out = static_cast<int>(d_out);
  config.use_text = (flags & kFlagText) != 0;
  config.use_visual = (flags & kFlagVisual) != 0;
  config.d_text = static_cast<int>(d_text);
  config.d_visual = static_cast<int>(d_visual);
  config.init_scale = init_scale;
  config.activation = (flags & kFlagIdentity) ? Activation::kIdentity : Activation::kTanh;
  config.validate();

  TowerParams params;
  params.id_table.resize(n, d_id);
  params.fusion_weight.resize(static_cast<size_t>(config.d_in()), d_out);
  params.fusion_bias.resize(d_out);
  read_doubles(buf, off, params.id_table.a.data(), params.id_table.a.size(), path);
  read_doubles(buf, off, params.fusion_weight.a.data(), params.fusion_weight.a.size(), path);
  read_doubles(buf, off, params.fusion_bias.data(), params.fusion_bias.size(), path);
  if (off != buf.size())
    throw ValidationError(path + ": trailing bytes after checkpoint payload");
  return {std::move(params), std::move(config)};
}

}  // namespace relrec
