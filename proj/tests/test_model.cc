// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <vector>

#include "doctest.h"
#include "relrec/model.h"
#include "test_util.h"

using namespace relrec;

namespace {

VideoRecord make_video(int64_t id, std::vector<double> text, std::vector<double> visual) {
  VideoRecord v;
  v.id = id;
  v.topics = {0};
  v.text_emb = std::move(text);
  v.visual_emb = std::move(visual);
  return v;
}

// Scalar tower: one id dim, one output dim, no content inputs.
TowerParams scalar_params(double id_val, double w, double b) {
  TowerParams p;
  p.id_table.resize(1, 1);
  p.id_table.a[0] = id_val;
  p.fusion_weight.resize(1, 1);
  p.fusion_weight.a[0] = w;
  p.fusion_bias = {b};
  return p;
}

}  // namespace

TEST_CASE("init_params is bounded, shaped, and seed-deterministic") {
  ModelConfig cfg;
  cfg.d_id = 3;
  cfg.d_out = 2;
  cfg.init_scale = 0.1;
  TowerParams a = init_params(cfg, 5, 42);
  TowerParams b = init_params(cfg, 5, 42);
  TowerParams c = init_params(cfg, 5, 43);

  CHECK(a.id_table.rows == 5);
  CHECK(a.id_table.cols == 3);
  CHECK(a.fusion_weight.rows == 3);
  CHECK(a.fusion_weight.cols == 2);
  CHECK(a.fusion_bias.size() == 2);

  for (double x : a.id_table.a) {
    CHECK(x >= -0.1);
    CHECK(x <= 0.1);
  }
  CHECK(a.id_table.a == b.id_table.a);
  CHECK(a.fusion_weight.a == b.fusion_weight.a);
  CHECK(a.fusion_bias == b.fusion_bias);
  CHECK(a.id_table.a != c.id_table.a);
  CHECK(a.all_finite());
}

TEST_CASE("embed applies tanh to the affine map") {
  ModelConfig cfg;
  cfg.d_id = 1;
  cfg.d_out = 1;
  // id 0.5 through weight 1.0 plus bias 0.25 pre-activates to 0.75.
  TowerParams p = scalar_params(0.5, 1.0, 0.25);
  VideoRecord v = make_video(0, {1.0}, {1.0});
  auto e = embed(p, cfg, v);
  REQUIRE(e.size() == 1);
  CHECK(e[0] == std::tanh(0.75));
  CHECK(e[0] == doctest::Approx(0.6351489523872873).epsilon(1e-15));

  cfg.activation = Activation::kIdentity;
  CHECK(embed(p, cfg, v)[0] == 0.75);
}

TEST_CASE("zero parameters embed every video to zero") {
  ModelConfig cfg;
  cfg.d_id = 2;
  cfg.d_out = 3;
  TowerParams p;
  p.id_table.resize(1, 2);
  p.fusion_weight.resize(2, 3);
  p.fusion_bias.assign(3, 0.0);
  auto e = embed(p, cfg, make_video(0, {1.0}, {1.0}));
  for (double x : e) CHECK(x == 0.0);
}

TEST_CASE("embedding is pure and ignores disabled modalities") {
  ModelConfig cfg;
  cfg.d_id = 1;
  cfg.d_out = 1;
  TowerParams p = scalar_params(0.5, 1.0, 0.25);
  VideoRecord v1 = make_video(0, {1.0, 2.0}, {3.0});
  VideoRecord v2 = make_video(0, {-9.0, 4.0}, {0.5});
  CHECK(embed(p, cfg, v1) == embed(p, cfg, v1));
  CHECK(embed(p, cfg, v1) == embed(p, cfg, v2));
}

TEST_CASE("enabled modalities concatenate after the id row") {
  ModelConfig cfg;
  cfg.d_id = 1;
  cfg.d_out = 1;
  cfg.use_text = true;
  cfg.use_visual = true;
  cfg.d_text = 2;
  cfg.d_visual = 1;
  cfg.activation = Activation::kIdentity;

  TowerParams p;
  p.id_table.resize(1, 1);
  p.id_table.a[0] = 0.5;
  p.fusion_weight.resize(4, 1);
  p.fusion_weight.a = {1.0, 10.0, 100.0, 1000.0};
  p.fusion_bias = {0.0};

  VideoRecord v = make_video(0, {2.0, 3.0}, {4.0});
  // 0.5*1 + 2*10 + 3*100 + 4*1000
  CHECK(embed(p, cfg, v)[0] == 4320.5);
}

TEST_CASE("forward_batch rows equal per-video embeddings") {
  ModelConfig cfg;
  cfg.d_id = 4;
  cfg.d_out = 3;
  TowerParams p = init_params(cfg, 6, 9);
  std::vector<VideoRecord> videos;
  for (int i = 0; i < 6; ++i) videos.push_back(make_video(i, {1.0}, {1.0}));

  std::vector<int64_t> ids = {5, 0, 3, 3};
  ForwardPass fp = forward_batch(p, cfg, videos, ids);
  REQUIRE(fp.e.rows == 4);
  REQUIRE(fp.e.cols == 3);
  for (size_t r = 0; r < ids.size(); ++r) {
    auto ref = embed(p, cfg, videos[static_cast<size_t>(ids[r])]);
    for (size_t c = 0; c < 3; ++c) CHECK(fp.e.at(r, c) == ref[c]);
  }
}

TEST_CASE("checkpoint round-trips parameters and config exactly") {
  TempDir dir;
  ModelConfig cfg;
  cfg.d_id = 3;
  cfg.d_out = 2;
  cfg.use_text = true;
  cfg.d_text = 2;
  cfg.init_scale = 0.25;
  cfg.activation = Activation::kIdentity;
  TowerParams p = init_params(cfg, 4, 77);

  const std::string path = dir.file("model.ckpt");
  checkpoint_save(p, cfg, path);
  auto [q, back] = checkpoint_load(path);

  CHECK(back.d_id == 3);
  CHECK(back.d_out == 2);
  CHECK(back.use_text);
  CHECK_FALSE(back.use_visual);
  CHECK(back.d_text == 2);
  CHECK(back.init_scale == 0.25);
  CHECK(back.activation == Activation::kIdentity);
  CHECK(q.id_table.a == p.id_table.a);
  CHECK(q.fusion_weight.a == p.fusion_weight.a);
  CHECK(q.fusion_bias == p.fusion_bias);
}

TEST_CASE("checkpoint load rejects corrupted files") {
  TempDir dir;
  ModelConfig cfg;
  TowerParams p = init_params(cfg, 2, 1);
  const std::string path = dir.file("model.ckpt");
  checkpoint_save(p, cfg, path);
  const std::string good = read_text(path);

  write_text(dir.file("magic.ckpt"), "XXXXXXXX" + good.substr(8));
  CHECK(throws_with<ValidationError>(
      [&] { checkpoint_load(dir.file("magic.ckpt")); }, "bad magic"));

  std::string versioned = good;
  versioned[8] = 9;
  write_text(dir.file("version.ckpt"), versioned);
  CHECK(throws_with<ValidationError>(
      [&] { checkpoint_load(dir.file("version.ckpt")); }, "version 9"));

  write_text(dir.file("short.ckpt"), good.substr(0, good.size() / 2));
  CHECK(throws_with<ValidationError>(
      [&] { checkpoint_load(dir.file("short.ckpt")); }, "truncated"));

  write_text(dir.file("long.ckpt"), good + "z");
  CHECK(throws_with<ValidationError>(
      [&] { checkpoint_load(dir.file("long.ckpt")); }, "trailing"));

  CHECK_THROWS_AS(checkpoint_load(dir.file("absent.ckpt")), IoError);
}

TEST_CASE("model config validation") {
  ModelConfig cfg;
  cfg.d_id = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = ModelConfig{};
  cfg.init_scale = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = ModelConfig{};
  cfg.use_text = true;  // d_text left at zero
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = ModelConfig{};
  cfg.use_visual = true;
  cfg.d_visual = 8;
  CHECK(cfg.d_in() == 24);
  CHECK_NOTHROW(cfg.validate());
}
