// SPDX-License-Identifier: Apache-2.0
#include "relrec/syngen.h"

#include <cmath>
#include <string>

#include "relrec/rng.h"

namespace relrec {

namespace {

std::vector<double> normalized(std::vector<double> v) {
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  const double n = std::sqrt(n2);
  if (!(n > 0.0)) throw std::runtime_error("degenerate zero-norm embedding draw");
  for (double& x : v) x /= n;
  return v;
}

std::vector<double> draw_unit_vector(Rng& rng, int d) {
  std::vector<double> v(static_cast<size_t>(d));
  for (double& x : v) x = rng.normal();
  return normalized(std::move(v));
}

std::vector<double> draw_around(Rng& rng, const std::vector<double>& centroid, double sigma) {
  std::vector<double> v(centroid.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = centroid[i] + sigma * rng.normal();
  return normalized(std::move(v));
}

}  // namespace

void SynthConfig::validate() const {
  if (n_videos < 2) throw ValidationError("syngen: n_videos must be >= 2");
  if (n_topics < 1) throw ValidationError("syngen: n_topics must be >= 1");
  if (n_topics > n_videos) throw ValidationError("syngen: n_topics must be <= n_videos");
  if (d_text < 1 || d_visual < 1) throw ValidationError("syngen: embedding dims must be >= 1");
  if (zipf_exponent < 0.0) throw ValidationError("syngen: zipf_exponent must be >= 0");
  if (cross_topic_noise < 0.0 || cross_topic_noise > 1.0)
    throw ValidationError("syngen: cross_topic_noise must be in [0, 1]");
  if (content_noise < 0.0) throw ValidationError("syngen: content_noise must be >= 0");
  if (n_pairs < 1) throw ValidationError("syngen: n_pairs must be >= 1");
}

Dataset generate_corpus(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const size_t n = static_cast<size_t>(config.n_videos);
  const size_t t = static_cast<size_t>(config.n_topics);

  std::vector<int> topic_of(n);
  std::vector<std::vector<int64_t>> members(t);
  for (size_t i = 0; i < n; ++i) {
    topic_of[i] = static_cast<int>(rng.uniform_int(t));
    members[static_cast<size_t>(topic_of[i])].push_back(static_cast<int64_t>(i));
  }

  std::vector<std::vector<double>> text_centroid(t), visual_centroid(t);
  for (size_t k = 0; k < t; ++k) text_centroid[k] = draw_unit_vector(rng, config.d_text);
  for (size_t k = 0; k < t; ++k) visual_centroid[k] = draw_unit_vector(rng, config.d_visual);

  Dataset ds;
  ds.videos.resize(n);
  for (size_t i = 0; i < n; ++i) {
    VideoRecord& v = ds.videos[i];
    v.id = static_cast<int64_t>(i);
    v.topics = {topic_of[i]};
    v.text_emb = draw_around(rng, text_centroid[static_cast<size_t>(topic_of[i])],
                             config.content_noise);
    v.visual_emb = draw_around(rng, visual_centroid[static_cast<size_t>(topic_of[i])],
                               config.content_noise);
  }

  // Popularity is attached to a random rank permutation, not to id order.
  const std::vector<size_t> by_rank = rng.permutation(n);
  std::vector<double> weight(n);
  for (size_t r = 0; r < n; ++r)
    weight[by_rank[r]] = std::pow(static_cast<double>(r + 1), -config.zipf_exponent);

  DiscreteDist global(weight);
  std::vector<DiscreteDist> per_topic;
  per_topic.reserve(t);
  std::vector<bool> topic_usable(t);
  for (size_t k = 0; k < t; ++k) {
    std::vector<double> w(members[k].size());
    for (size_t m = 0; m < members[k].size(); ++m)
      w[m] = weight[static_cast<size_t>(members[k][m])];
    topic_usable[k] = members[k].size() >= 2;
    per_topic.emplace_back(w.empty() ? std::vector<double>{1.0} : w);
  }

  ds.pairs.reserve(static_cast<size_t>(config.n_pairs));
  for (int64_t p = 0; p < config.n_pairs; ++p) {
    const auto trigger = static_cast<int64_t>(global.sample(rng));
    const size_t k = static_cast<size_t>(topic_of[static_cast<size_t>(trigger)]);
    const bool same_topic =
        rng.uniform() < 1.0 - config.cross_topic_noise && topic_usable[k];
    int64_t candidate = trigger;
    while (candidate == trigger) {
      candidate = same_topic
                      ? members[k][per_topic[k].sample(rng)]
                      : static_cast<int64_t>(global.sample(rng));
    }
    ds.pairs.push_back({trigger, candidate});
  }
  return ds;
}

}  // namespace relrec
