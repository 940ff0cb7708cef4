// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "relrec/ablation.h"
#include "relrec/syngen.h"

using namespace relrec;

namespace {

Dataset small_corpus() {
  SynthConfig cfg;
  cfg.n_videos = 120;
  cfg.n_topics = 4;
  cfg.d_text = 4;
  cfg.d_visual = 8;
  cfg.n_pairs = 2500;
  cfg.seed = 31;
  return generate_corpus(cfg);
}

TrainConfig small_train() {
  TrainConfig t;
  t.epochs = 1;
  t.batch_size = 256;
  return t;
}

std::map<std::string, std::string> parse_ini(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\"");
      const auto b = s.find_last_not_of(" \t\"");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace

TEST_CASE("the sweep rows are fixed in name, order, and wiring") {
  const auto rows = default_ablation_rows();
  REQUIRE(rows.size() == 11);
  const std::vector<std::string> names = {
      "baseline_cf",          "content_only",         "mtl_1_1",
      "mtl_1_10",             "mtl_1_100",            "mtl_1_500",
      "mtl_1_1000",           "mtl_multimodal_text",  "mtl_multimodal_visual",
      "mtl_multimodal_both",  "mtl_multimodal_opc"};
  for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].name == names[i]);

  CHECK(rows[0].weights.w_sem == 0.0);
  CHECK(rows[0].ratio == "1:0");
  CHECK_FALSE(rows[1].trained);
  CHECK(rows[2].weights.w_sem == 1.0);
  CHECK(rows[6].weights.w_sem == 1000.0);
  for (size_t i = 7; i <= 10; ++i) CHECK(rows[i].weights.w_sem == 500.0);
  CHECK(rows[7].use_text);
  CHECK_FALSE(rows[7].use_visual);
  CHECK(rows[8].use_visual);
  CHECK_FALSE(rows[8].use_text);
  CHECK(rows[9].use_text);
  CHECK(rows[9].use_visual);
  CHECK(rows[10].use_text);
  CHECK(rows[10].use_visual);
  CHECK(rows[10].opc_enabled);
  for (size_t i = 0; i < 10; ++i) CHECK_FALSE(rows[i].opc_enabled);
}

TEST_CASE("run_ablation evaluates every row against one shared split") {
  Dataset ds = small_corpus();
  AblationReport report = run_ablation(ds, default_ablation_rows(), ModelConfig{},
                                       small_train(), EvalConfig{}, 0.2, 5);
  REQUIRE(report.rows.size() == 11);
  CHECK(report.n_videos == 120);
  CHECK(report.n_eval_pairs == 500);
  CHECK(report.n_train_pairs == 2000);
  for (const auto& r : report.rows) {
    CHECK(r.metrics.recall_at_k >= 0.0);
    CHECK(r.metrics.recall_at_k <= 1.0);
    CHECK(r.metrics.topic_match_rate >= 0.0);
    CHECK(r.metrics.topic_match_rate <= 1.0);
    CHECK(r.wall_clock_sec >= 0.0);
    if (r.row.trained) {
      CHECK(r.train_report.epochs.size() == 1);
    } else {
      CHECK(r.train_report.epochs.empty());
    }
  }
}

TEST_CASE("the ablation table is byte-stable across repeat runs") {
  Dataset ds = small_corpus();
  const auto rows = default_ablation_rows();
  AblationReport a = run_ablation(ds, rows, ModelConfig{}, small_train(), EvalConfig{}, 0.2, 5);
  AblationReport b = run_ablation(ds, rows, ModelConfig{}, small_train(), EvalConfig{}, 0.2, 5);
  const std::string ta = format_ablation_table(a);
  CHECK(ta == format_ablation_table(b));

  CHECK(ta.rfind("# k=10\t", 0) == 0);
  size_t lines = 0;
  for (char c : ta)
    if (c == '\n') ++lines;
  CHECK(lines == 13);  // comment, header, 11 rows
  CHECK(ta.find("baseline_cf\t1:0\t") != std::string::npos);
  CHECK(ta.find("content_only\t-\t") != std::string::npos);
  CHECK(ta.find("mtl_multimodal_opc\t1:500\t") != std::string::npos);
}

TEST_CASE("the detail report carries training curves and parses as json") {
  Dataset ds = small_corpus();
  AblationReport report = run_ablation(ds, default_ablation_rows(), ModelConfig{},
                                       small_train(), EvalConfig{}, 0.2, 5);
  auto j = nlohmann::json::parse(format_ablation_detail(report));
  REQUIRE(j["rows"].size() == 11);
  CHECK(j["rows"][0]["name"] == "baseline_cf");
  CHECK(j["rows"][0]["metrics"]["recall_at_k"].is_number());
  CHECK(j["rows"][0]["epochs"].size() == 1);
  CHECK(j["config"]["n_videos"] == 120);
}

TEST_CASE("config serializers emit the resolved values") {
  auto jm = nlohmann::json::parse(model_config_json(ModelConfig{}));
  CHECK(jm["d_id"] == 16);
  CHECK(jm["activation"] == "tanh");
  auto jt = nlohmann::json::parse(train_config_json(TrainConfig{}));
  CHECK(jt["learning_rate"] == 0.01);
  CHECK(jt["opc_enabled"] == false);
  auto je = nlohmann::json::parse(eval_config_json(EvalConfig{}));
  CHECK(je["k"] == 10);
  auto js = nlohmann::json::parse(synth_config_json(SynthConfig{}));
  CHECK(js["n_videos"] == 2000);
}

TEST_CASE("the reference ini mirrors the built-in preset") {
  const ReferencePreset p = reference_preset();
  const auto kv = parse_ini(std::string(RELREC_SOURCE_DIR) + "/configs/reference.ini");

  auto num = [&](const std::string& key) {
    REQUIRE(kv.count(key) == 1);
    return std::stod(kv.at(key));
  };
  CHECK(num("d-id") == p.model.d_id);
  CHECK(num("d-out") == p.model.d_out);
  CHECK(num("init-scale") == p.model.init_scale);
  CHECK(num("epochs") == p.train.epochs);
  CHECK(num("batch-size") == p.train.batch_size);
  CHECK(num("learning-rate") == p.train.learning_rate);
  CHECK(num("adam-beta1") == p.train.adam_beta1);
  CHECK(num("adam-beta2") == p.train.adam_beta2);
  CHECK(num("adam-epsilon") == p.train.adam_epsilon);
  CHECK(num("cosine-threshold") == p.train.sem_config.cosine_threshold);
  CHECK(num("seed") == p.train.seed);
  CHECK(num("holdout") == p.holdout_fraction);
  CHECK(num("k") == p.eval.k);
  CHECK(num("popular-fraction") == p.eval.popular_top_fraction);
  CHECK(num("unpopular-fraction") == p.eval.unpopular_bottom_fraction);
}
