// SPDX-License-Identifier: Apache-2.0
#include "relrec/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "relrec/fsutil.h"
#include "relrec/rng.h"

namespace relrec {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> parse_real_array(const json& j, const char* field,
                                     const std::string& where) {
  if (!j.contains(field) || !j[field].is_array())
    throw ValidationError(where + ": missing or non-array field '" + field + "'");
  std::vector<double> out;
  out.reserve(j[field].size());
  for (const auto& v : j[field]) {
    if (!v.is_number()) throw ValidationError(where + ": non-numeric entry in '" + field + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

void validate_dataset(const Dataset& ds, const std::string& context) {
  const size_t n = ds.videos.size();
  for (size_t i = 0; i < n; ++i) {
    const VideoRecord& v = ds.videos[i];
    if (v.id != static_cast<int64_t>(i))
      throw ValidationError(context + ": ids must be contiguous 0..N-1; index " +
                            std::to_string(i) + " holds id " + std::to_string(v.id));
    if (v.topics.empty())
      throw ValidationError(context + ": video " + std::to_string(v.id) + " has no topics");
    if (v.text_emb.size() != ds.videos[0].text_emb.size() ||
        v.visual_emb.size() != ds.videos[0].visual_emb.size())
      throw ValidationError(context + ": video " + std::to_string(v.id) +
                            " embedding dimensions differ from video 0");
  }
  for (size_t i = 0; i < ds.pairs.size(); ++i) {
    const InteractionPair& p = ds.pairs[i];
    const auto ok = [&](int64_t id) { return id >= 0 && static_cast<size_t>(id) < n; };
    if (!ok(p.trigger) || !ok(p.candidate))
      throw ValidationError(context + ": pair " + std::to_string(i) +
                            " references unknown video id " +
                            std::to_string(ok(p.trigger) ? p.candidate : p.trigger));
    if (p.trigger == p.candidate)
      throw ValidationError(context + ": pair " + std::to_string(i) + " is a self-pair (id " +
                            std::to_string(p.trigger) + ")");
  }
}

std::vector<VideoRecord> load_videos(const std::string& videos_path) {
  std::vector<VideoRecord> videos;
  std::ifstream in(videos_path);
  if (!in) throw IoError("cannot open: " + videos_path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = videos_path + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(where + ": malformed record: " + e.what());
    }
    VideoRecord v;
    if (!j.contains("id") || !j["id"].is_number_integer())
      throw ValidationError(where + ": missing integer field 'id'");
    v.id = j["id"].get<int64_t>();
    if (!j.contains("topics") || !j["topics"].is_array() || j["topics"].empty())
      throw ValidationError(where + ": 'topics' must be a non-empty array");
    for (const auto& t : j["topics"]) {
      if (!t.is_number_integer() || t.get<int64_t>() < 0)
        throw ValidationError(where + ": topics must be non-negative integers");
      v.topics.push_back(t.get<int>());
    }
    std::sort(v.topics.begin(), v.topics.end());
    v.topics.erase(std::unique(v.topics.begin(), v.topics.end()), v.topics.end());
    v.text_emb = parse_real_array(j, "text_emb", where);
    v.visual_emb = parse_real_array(j, "visual_emb", where);
    if (!videos.empty()) {
      if (v.text_emb.size() != videos[0].text_emb.size())
        throw ValidationError(where + ": text_emb dimension " +
                              std::to_string(v.text_emb.size()) + " differs from line 1's " +
                              std::to_string(videos[0].text_emb.size()));
      if (v.visual_emb.size() != videos[0].visual_emb.size())
        throw ValidationError(where + ": visual_emb dimension " +
                              std::to_string(v.visual_emb.size()) + " differs from line 1's " +
                              std::to_string(videos[0].visual_emb.size()));
    }
    if (v.id != static_cast<int64_t>(videos.size()))
      throw ValidationError(where + ": expected id " + std::to_string(videos.size()) +
                            " (ids must be contiguous in file order), got " +
                            std::to_string(v.id));
    videos.push_back(std::move(v));
  }
  return videos;
}

Dataset load_dataset(const std::string& videos_path, const std::string& interactions_path) {
  Dataset ds;
  ds.videos = load_videos(videos_path);
  {
    std::ifstream in(interactions_path);
    if (!in) throw IoError("cannot open: " + interactions_path);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = interactions_path + ":" + std::to_string(lineno);
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ValidationError(where + ": malformed record: " + e.what());
      }
      if (!j.contains("trigger") || !j.contains("candidate") ||
          !j["trigger"].is_number_integer() || !j["candidate"].is_number_integer())
        throw ValidationError(where + ": needs integer fields 'trigger' and 'candidate'");
      InteractionPair p;
      p.trigger = j["trigger"].get<int64_t>();
      p.candidate = j["candidate"].get<int64_t>();
      const auto ok = [&](int64_t id) {
        return id >= 0 && static_cast<size_t>(id) < ds.videos.size();
      };
      if (!ok(p.trigger))
        throw ValidationError(where + ": unknown trigger id " + std::to_string(p.trigger));
      if (!ok(p.candidate))
        throw ValidationError(where + ": unknown candidate id " + std::to_string(p.candidate));
      if (p.trigger == p.candidate)
        throw ValidationError(where + ": self-pair (id " + std::to_string(p.trigger) + ")");
      ds.pairs.push_back(p);
    }
  }
  validate_dataset(ds, videos_path);
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& videos_path,
                  const std::string& interactions_path) {
  std::string vbuf;
  for (const VideoRecord& v : ds.videos) {
    json j;
    j["id"] = v.id;
    j["topics"] = v.topics;
    j["text_emb"] = v.text_emb;
    j["visual_emb"] = v.visual_emb;
    vbuf += j.dump();
    vbuf += '\n';
  }
  std::string pbuf;
  for (const InteractionPair& p : ds.pairs) {
    json j;
    j["trigger"] = p.trigger;
    j["candidate"] = p.candidate;
    pbuf += j.dump();
    pbuf += '\n';
  }
  atomic_write_file(videos_path, vbuf);
  atomic_write_file(interactions_path, pbuf);
}

FrequencyTable build_frequency_table(const std::vector<InteractionPair>& pairs,
                                     size_t n_videos) {
  size_t n = n_videos;
  if (n == 0) {
    for (const auto& p : pairs)
      n = std::max(n, static_cast<size_t>(p.trigger) + 1);
  }
  FrequencyTable t;
  t.counts.assign(n, 0);
  for (const auto& p : pairs) {
    ++t.counts[static_cast<size_t>(p.trigger)];
    ++t.total;
  }
  return t;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double holdout_fraction,
                                          uint64_t seed) {
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0))
    throw ValidationError("holdout_fraction must be in [0, 1)");
  const size_t n = ds.pairs.size();
  const size_t n_eval = static_cast<size_t>(holdout_fraction * static_cast<double>(n));
  Rng rng(seed);
  std::vector<size_t> perm = rng.permutation(n);
  std::vector<char> is_eval(n, 0);
  for (size_t i = 0; i < n_eval; ++i) is_eval[perm[i]] = 1;
  Dataset train, eval;
  train.videos = ds.videos;
  eval.videos = ds.videos;
  train.pairs.reserve(n - n_eval);
  eval.pairs.reserve(n_eval);
  for (size_t i = 0; i < n; ++i)
    (is_eval[i] ? eval : train).pairs.push_back(ds.pairs[i]);
  return {std::move(train), std::move(eval)};
}

}  // namespace relrec
