// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "test_util.h"

namespace {

const std::string kCli = RELREC_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  return out;
}

// One tiny corpus shared by the pipeline cases below.
struct Pipeline {
  TempDir dir;
  std::string videos, pairs;

  Pipeline() {
    videos = dir.file("v.jsonl");
    pairs = dir.file("p.jsonl");
    REQUIRE(run("gen-data --videos-out " + videos + " --pairs-out " + pairs +
                " --n-videos 60 --n-topics 3 --n-pairs 600 --seed 4") == 0);
  }

  std::string train_flags() const {
    return " --videos " + videos + " --pairs " + pairs +
           " --epochs 1 --batch-size 64 --d-id 8 --d-out 8 --seed 3";
  }
};

}  // namespace

TEST_CASE("cli maps error classes to distinct exit codes") {
  TempDir dir;
  CHECK(run("no-such-command") == 2);
  CHECK(run("train") == 2);  // missing required options
  CHECK(run("gen-data --videos-out " + dir.file("v") + " --pairs-out " + dir.file("p") +
            " --n-videos 1") == 3);  // fails validation
  CHECK(run("eval --videos " + dir.file("absent_v") + " --pairs " + dir.file("absent_p") +
            " --index " + dir.file("absent_i")) == 4);
}

TEST_CASE("gen-data writes byte-identical files per seed") {
  TempDir dir;
  const std::string base = "gen-data --n-videos 50 --n-topics 3 --n-pairs 400 --seed 9";
  REQUIRE(run(base + " --videos-out " + dir.file("va") + " --pairs-out " + dir.file("pa")) == 0);
  REQUIRE(run(base + " --videos-out " + dir.file("vb") + " --pairs-out " + dir.file("pb")) == 0);
  CHECK(read_text(dir.file("va")) == read_text(dir.file("vb")));
  CHECK(read_text(dir.file("pa")) == read_text(dir.file("pb")));
}

TEST_CASE("train, eval, and recommend form a working pipeline") {
  Pipeline pl;
  const std::string ckpt = pl.dir.file("model.ckpt");
  const std::string index = pl.dir.file("embeddings.idx");
  const std::string report = pl.dir.file("train.json");
  REQUIRE(run("train" + pl.train_flags() + " --checkpoint-out " + ckpt +
              " --index-out " + index + " --report-out " + report) == 0);

  auto jr = nlohmann::json::parse(read_text(report));
  CHECK(jr["epochs"].size() == 1);
  CHECK(jr["config"]["train"]["batch_size"] == 64);

  const std::string metrics =
      capture("eval --videos " + pl.videos + " --pairs " + pl.pairs + " --checkpoint " +
              ckpt + " --split-seed 3");
  auto jm = nlohmann::json::parse(metrics);
  CHECK(jm["k"] == 10);
  CHECK(jm["recall_at_k"].is_number());

  // The index path must agree with re-embedding from the checkpoint.
  const std::string via_index =
      capture("recommend --index " + index + " --trigger 5 --k 4");
  const std::string via_ckpt = capture("recommend --checkpoint " + ckpt + " --videos " +
                                       pl.videos + " --trigger 5 --k 4");
  CHECK(via_index == via_ckpt);
  size_t lines = 0;
  for (char c : via_index)
    if (c == '\n') ++lines;
  CHECK(lines == 4);

  // eval accepts exactly one embedding source.
  CHECK(run("eval --videos " + pl.videos + " --pairs " + pl.pairs + " --checkpoint " +
            ckpt + " --index " + index) == 2);
  CHECK(run("recommend --trigger 5") == 2);
}

TEST_CASE("failed runs leave no partial output files") {
  Pipeline pl;
  const std::string ckpt = pl.dir.file("bad.ckpt");
  // batch_size larger than the training split fails after parsing.
  CHECK(run("train --videos " + pl.videos + " --pairs " + pl.pairs +
            " --batch-size 4096 --checkpoint-out " + ckpt) == 3);
  CHECK_FALSE(std::filesystem::exists(ckpt));
}

TEST_CASE("ablate writes the table and detail reports") {
  Pipeline pl;
  const std::string table = pl.dir.file("table.tsv");
  const std::string detail = pl.dir.file("detail.json");
  REQUIRE(run("ablate --videos " + pl.videos + " --pairs " + pl.pairs + " --table-out " +
              table + " --detail-out " + detail +
              " --epochs 1 --batch-size 64 --d-id 8 --d-out 8 --holdout 0.2 --seed 3") == 0);
  const std::string t = read_text(table);
  CHECK(t.rfind("# k=10\t", 0) == 0);
  CHECK(t.find("mtl_multimodal_opc") != std::string::npos);
  auto jd = nlohmann::json::parse(read_text(detail));
  CHECK(jd["rows"].size() == 11);
}

TEST_CASE("ini config files feed options and flags still win") {
  Pipeline pl;
  const std::string ini = pl.dir.file("run.ini");
  write_text(ini,
             "[gen-data]\nn-videos=40\nn-topics=2\nn-pairs=300\nseed=8\n");
  TempDir out;
  REQUIRE(run("--config " + ini + " gen-data --videos-out " + out.file("v") +
              " --pairs-out " + out.file("p")) == 0);
  size_t lines = 0;
  for (char c : read_text(out.file("v")))
    if (c == '\n') ++lines;
  CHECK(lines == 40);

  // The explicit flag overrides the ini value.
  REQUIRE(run("--config " + ini + " gen-data --n-videos 25 --videos-out " +
              out.file("v2") + " --pairs-out " + out.file("p2")) == 0);
  lines = 0;
  for (char c : read_text(out.file("v2")))
    if (c == '\n') ++lines;
  CHECK(lines == 25);

  // A config path that does not exist is a usage error.
  CHECK(run("--config " + out.file("missing.ini") + " gen-data --videos-out " +
            out.file("v3") + " --pairs-out " + out.file("p3")) == 2);
}
