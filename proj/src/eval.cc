// SPDX-License-Identifier: Apache-2.0
#include "relrec/eval.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace relrec {
namespace {

// Topic vectors are sorted and deduplicated at load time.
int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  size_t i = 0;
  size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::vector<std::vector<ScoredVideo>> all_top_k(const EmbeddingIndex& index, int k) {
  const int64_t n = index.size();
  std::vector<std::vector<ScoredVideo>> lists(static_cast<size_t>(n));
  for (int64_t id = 0; id < n; ++id) {
    lists[static_cast<size_t>(id)] = top_k(index, id, k);
  }
  return lists;
}

double recall_from_lists(const std::vector<std::vector<ScoredVideo>>& lists,
                         const std::vector<InteractionPair>& pairs) {
  if (pairs.empty()) {
    throw ValidationError("recall_at_k: empty evaluation pair set");
  }
  int64_t hits = 0;
  for (const auto& p : pairs) {
    const auto& list = lists[static_cast<size_t>(p.trigger)];
    for (const auto& sv : list) {
      if (sv.id == p.candidate) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

std::pair<double, double> relevance_from_lists(const std::vector<std::vector<ScoredVideo>>& lists,
                                               const std::vector<VideoRecord>& videos,
                                               const std::vector<int64_t>& trigger_set) {
  int64_t slots = 0;
  int64_t matched = 0;
  double overlap_sum = 0.0;
  for (int64_t t : trigger_set) {
    const auto& topics_t = videos[static_cast<size_t>(t)].topics;
    for (const auto& sv : lists[static_cast<size_t>(t)]) {
      const auto& topics_c = videos[static_cast<size_t>(sv.id)].topics;
      const int inter = intersection_size(topics_t, topics_c);
      const int uni = static_cast<int>(topics_t.size() + topics_c.size()) - inter;
      if (inter > 0) ++matched;
      overlap_sum += static_cast<double>(inter) / static_cast<double>(uni);
      ++slots;
    }
  }
  if (slots == 0) {
    throw ValidationError("topic_relevance: no recommendation slots produced");
  }
  return {static_cast<double>(matched) / static_cast<double>(slots),
          overlap_sum / static_cast<double>(slots)};
}

}  // namespace

void EvalConfig::validate() const {
  if (k < 1) {
    throw ValidationError("eval config: k must be at least 1");
  }
  if (!(popular_top_fraction > 0.0) || popular_top_fraction > 1.0) {
    throw ValidationError("eval config: popular_top_fraction must be in (0, 1]");
  }
  if (!(unpopular_bottom_fraction > 0.0) || unpopular_bottom_fraction > 1.0) {
    throw ValidationError("eval config: unpopular_bottom_fraction must be in (0, 1]");
  }
}

double recall_at_k(const EmbeddingIndex& index, const std::vector<InteractionPair>& eval_pairs,
                   int k) {
  if (eval_pairs.empty()) {
    throw ValidationError("recall_at_k: empty evaluation pair set");
  }
  int64_t hits = 0;
  for (const auto& p : eval_pairs) {
    const auto list = top_k(index, p.trigger, k);
    for (const auto& sv : list) {
      if (sv.id == p.candidate) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(eval_pairs.size());
}

std::pair<double, double> topic_relevance(const EmbeddingIndex& index,
                                          const std::vector<VideoRecord>& videos,
                                          const std::vector<int64_t>& trigger_set, int k) {
  if (index.size() != static_cast<int64_t>(videos.size())) {
    throw ValidationError("topic_relevance: index and catalog sizes differ");
  }
  int64_t slots = 0;
  int64_t matched = 0;
  double overlap_sum = 0.0;
  for (int64_t t : trigger_set) {
    if (t < 0 || t >= index.size()) {
      throw ValidationError("topic_relevance: trigger id out of range");
    }
    const auto& topics_t = videos[static_cast<size_t>(t)].topics;
    if (topics_t.empty()) {
      throw ValidationError("topic_relevance: trigger " + std::to_string(t) +
                            " has an empty topic set");
    }
    for (const auto& sv : top_k(index, t, k)) {
      const auto& topics_c = videos[static_cast<size_t>(sv.id)].topics;
      const int inter = intersection_size(topics_t, topics_c);
      const int uni = static_cast<int>(topics_t.size() + topics_c.size()) - inter;
      if (inter > 0) ++matched;
      overlap_sum += static_cast<double>(inter) / static_cast<double>(uni);
      ++slots;
    }
  }
  if (slots == 0) {
    throw ValidationError("topic_relevance: no recommendation slots produced");
  }
  return {static_cast<double>(matched) / static_cast<double>(slots),
          overlap_sum / static_cast<double>(slots)};
}

std::vector<int64_t> popularity_order(const FrequencyTable& freq) {
  std::vector<int64_t> ids(freq.counts.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int64_t>(i);
  std::sort(ids.begin(), ids.end(), [&freq](int64_t a, int64_t b) {
    const int64_t ca = freq.counts[static_cast<size_t>(a)];
    const int64_t cb = freq.counts[static_cast<size_t>(b)];
    if (ca != cb) return ca > cb;
    return a < b;
  });
  return ids;
}

double popular_share(const EmbeddingIndex& index, const std::vector<int64_t>& trigger_set,
                     const FrequencyTable& freq, const EvalConfig& config, int k) {
  config.validate();
  const auto order = popularity_order(freq);
  const size_t n_popular = std::max<size_t>(
      1, static_cast<size_t>(static_cast<double>(order.size()) * config.popular_top_fraction));
  std::unordered_set<int64_t> popular_ids(order.begin(),
                                          order.begin() + static_cast<ptrdiff_t>(n_popular));
  int64_t slots = 0;
  int64_t popular_slots = 0;
  for (int64_t t : trigger_set) {
    for (const auto& sv : top_k(index, t, k)) {
      if (popular_ids.count(sv.id) != 0) ++popular_slots;
      ++slots;
    }
  }
  if (slots == 0) {
    throw ValidationError("popular_share: no recommendation slots produced");
  }
  return static_cast<double>(popular_slots) / static_cast<double>(slots);
}

MetricsReport compute_metrics(const EmbeddingIndex& index,
                              const std::vector<VideoRecord>& videos,
                              const std::vector<InteractionPair>& eval_pairs,
                              const FrequencyTable& freq, const EvalConfig& config) {
  config.validate();
  const int64_t n = index.size();
  if (n != static_cast<int64_t>(videos.size())) {
    throw ValidationError("compute_metrics: index and catalog sizes differ");
  }
  if (freq.counts.size() != videos.size()) {
    throw ValidationError("compute_metrics: frequency table and catalog sizes differ");
  }
  if (eval_pairs.empty()) {
    throw ValidationError("compute_metrics: empty evaluation pair set");
  }
  for (const auto& p : eval_pairs) {
    if (p.trigger < 0 || p.trigger >= n || p.candidate < 0 || p.candidate >= n) {
      throw ValidationError("compute_metrics: evaluation pair id out of range");
    }
  }

  const auto lists = all_top_k(index, config.k);

  std::vector<int64_t> full_set(static_cast<size_t>(n));
  for (int64_t id = 0; id < n; ++id) full_set[static_cast<size_t>(id)] = id;

  MetricsReport report;
  report.k = config.k;
  report.recall_at_k = recall_from_lists(lists, eval_pairs);
  const auto rel = relevance_from_lists(lists, videos, full_set);
  report.topic_match_rate = rel.first;
  report.mean_topic_overlap = rel.second;

  const auto order = popularity_order(freq);
  const size_t n_popular = std::max<size_t>(
      1, static_cast<size_t>(static_cast<double>(order.size()) * config.popular_top_fraction));
  const size_t n_unpopular = std::max<size_t>(
      1, static_cast<size_t>(static_cast<double>(order.size()) * config.unpopular_bottom_fraction));
  std::unordered_set<int64_t> popular_ids(order.begin(),
                                          order.begin() + static_cast<ptrdiff_t>(n_popular));

  int64_t slots = 0;
  int64_t popular_slots = 0;
  for (const auto& list : lists) {
    for (const auto& sv : list) {
      if (popular_ids.count(sv.id) != 0) ++popular_slots;
      ++slots;
    }
  }
  report.popular_share = static_cast<double>(popular_slots) / static_cast<double>(slots);

  const std::vector<int64_t> popular_set(order.begin(),
                                         order.begin() + static_cast<ptrdiff_t>(n_popular));
  const std::vector<int64_t> unpopular_set(order.end() - static_cast<ptrdiff_t>(n_unpopular),
                                           order.end());
  const std::unordered_set<int64_t> popular_lookup(popular_set.begin(), popular_set.end());
  const std::unordered_set<int64_t> unpopular_lookup(unpopular_set.begin(), unpopular_set.end());

  std::vector<InteractionPair> popular_pairs;
  std::vector<InteractionPair> unpopular_pairs;
  for (const auto& p : eval_pairs) {
    if (popular_lookup.count(p.trigger) != 0) popular_pairs.push_back(p);
    if (unpopular_lookup.count(p.trigger) != 0) unpopular_pairs.push_back(p);
  }

  // A bucket with no held-out pairs reports recall 0; topic relevance is
  // still defined because every trigger produces recommendations.
  report.popular.recall_at_k =
      popular_pairs.empty() ? 0.0 : recall_from_lists(lists, popular_pairs);
  report.popular.topic_match_rate = relevance_from_lists(lists, videos, popular_set).first;
  report.unpopular.recall_at_k =
      unpopular_pairs.empty() ? 0.0 : recall_from_lists(lists, unpopular_pairs);
  report.unpopular.topic_match_rate = relevance_from_lists(lists, videos, unpopular_set).first;
  report.all.recall_at_k = report.recall_at_k;
  report.all.topic_match_rate = report.topic_match_rate;
  return report;
}

std::string format_metrics_report(const MetricsReport& report,
                                  const std::string& resolved_config_json) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["recall_at_k"] = report.recall_at_k;
  j["topic_match_rate"] = report.topic_match_rate;
  j["mean_topic_overlap"] = report.mean_topic_overlap;
  j["popular_share"] = report.popular_share;
  j["buckets"] = nlohmann::ordered_json::object();
  const auto bucket = [](const BucketMetrics& b) {
    nlohmann::ordered_json o;
    o["recall_at_k"] = b.recall_at_k;
    o["topic_match_rate"] = b.topic_match_rate;
    return o;
  };
  j["buckets"]["popular"] = bucket(report.popular);
  j["buckets"]["unpopular"] = bucket(report.unpopular);
  j["buckets"]["all"] = bucket(report.all);
  if (!resolved_config_json.empty()) {
    j["config"] = nlohmann::ordered_json::parse(resolved_config_json);
  }
  return j.dump(2) + "\n";
}

}  // namespace relrec
