// Copyright 2026 The UnityGraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <fstream>
#include <functional>
#include <map>

#include "gpl/error.hpp"
#include "gpl/hash.hpp"
#include "gpl/manifest.hpp"
#include "gpl/pipeline.hpp"
#include "gpl/synth.hpp"
#include "test_util.hpp"

using namespace gpl;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected gpl::Error");
  return ErrorCode::IoError;
}

// small task plus a light config
PipelineConfig small_task(const fs::path& dir, std::uint32_t videos = 3) {
  auto spec = synth_a_spec();
  spec.videos = videos;
  write_task(generate_task(spec), dir / "task");
  PipelineConfig cfg;
  cfg.manifest = dir / "task" / "manifest.json";
  cfg.output = dir / "out";
  cfg.walk.walk_length = 20;
  cfg.walk.walks_per_node = 4;
  cfg.train.dim = 16;
  cfg.train.window = 4;
  cfg.train.epochs = 2;
  cfg.cluster.restarts = 3;
  return cfg;
}

std::map<std::string, std::string> artifacts(const fs::path& out) {
  return tree_hashes(out, nondeterministic_artifacts());
}

}  // namespace

TEST_CASE("hash: known sha256 vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config: parse, defaults and round trip") {
  test::TempDir dir("cfg");
  { std::ofstream(dir / "manifest.json") << "{}"; }
  const auto cfg = parse_pipeline_config(
      R"({"manifest":"manifest.json","output":"o","walk":{"p":2},"cluster":{"K":5},"ordering":{"mode":"global"}})",
      dir.path());
  CHECK(cfg.manifest == dir.path() / "manifest.json");
  CHECK(cfg.output == dir.path() / "o");
  CHECK(cfg.walk.p == 2.0);
  CHECK(cfg.walk.q == 0.5);
  CHECK(cfg.train.dim == 128);
  CHECK(*cfg.cluster.k == 5);
  CHECK(cfg.ordering == OrderingMode::Global);
  CHECK(cfg.deterministic);

  const auto again = parse_pipeline_config(format_pipeline_config(cfg, dir.path()), dir.path());
  CHECK(again.hash() == cfg.hash());
  CHECK(again.manifest == cfg.manifest);

  CHECK(code_of([&] { parse_pipeline_config(R"({"manifest":"manifest.json","walk":{"pp":2}})", dir.path()); }) ==
        ErrorCode::ConfigError);
  CHECK(code_of([&] { parse_pipeline_config(R"({"manifest":"missing.json"})", dir.path()); }) ==
        ErrorCode::ConfigError);
  CHECK(code_of([&] { parse_pipeline_config(R"({"manifest":"manifest.json","walk":{"p":0}})", dir.path()); }) ==
        ErrorCode::ConfigError);
  CHECK(exit_code_for(ErrorCode::ConfigError) == 2);
  CHECK(exit_code_for(ErrorCode::FormatError) == 3);
  CHECK(exit_code_for(ErrorCode::NumericalError) == 4);
}

TEST_CASE("config: hash tracks meaningful fields only") {
  test::TempDir dir("cfghash");
  { std::ofstream(dir / "manifest.json") << "{}"; }
  const auto base = parse_pipeline_config(R"({"manifest":"manifest.json"})", dir.path());
  auto other = base;
  other.threads = 8;
  other.output = "/elsewhere";
  CHECK(other.hash() == base.hash());

  const std::vector<std::function<void(PipelineConfig&)>> edits{
      [](auto& c) { c.walk.p = 2; },          [](auto& c) { c.walk.q = 1; },
      [](auto& c) { c.walk.walk_length = 5; }, [](auto& c) { c.walk.seed = 1; },
      [](auto& c) { c.train.dim = 8; },        [](auto& c) { c.train.learning_rate = 0.1; },
      [](auto& c) { c.cluster.k = 3; },        [](auto& c) { c.cluster.restarts = 2; },
      [](auto& c) { c.background.tau = 0.7; }, [](auto& c) { c.background.enabled = false; },
      [](auto& c) { c.sampler = SamplerConfig{1, 8, 8}; },
      [](auto& c) { c.spatial_weight = SpatialWeight::Cosine; },
      [](auto& c) { c.ordering = OrderingMode::PerVideo; }, [](auto& c) { c.deterministic = false; }};
  for (const auto& edit : edits) {
    auto c = base;
    edit(c);
    CHECK(c.hash() != base.hash());
  }
  auto walk_only = base;
  walk_only.walk.p = 3;
  CHECK(walk_only.hash(Stage::Graph) == base.hash(Stage::Graph));
  CHECK(walk_only.hash(Stage::Embed) != base.hash(Stage::Embed));
}

TEST_CASE("pipeline: all stages, reruns skip, force reruns") {
  test::TempDir dir("pipe");
  const auto cfg = small_task(dir.path());
  Pipeline p(cfg);
  const auto first = p.run(Stage::All);
  REQUIRE(first.size() == 6);
  for (const auto& r : first) CHECK_FALSE(r.skipped);
  for (const char* f : {"filter/kept_clips.csv", "graph/edges.csv", "graph/nodes.csv", "embed/embeddings.uge",
                        "embed/walks.txt", "cluster/assignments.csv", "cluster/centroids.ugc",
                        "cluster/projection.csv", "order/order.txt", "eval/report.txt", "eval/report.csv",
                        "eval/per_keystep.csv", "eval/stage.json", "eval/timing.json"}) {
    CHECK_MESSAGE(fs::exists(cfg.output / f), f);
  }
  CHECK_FALSE(fs::exists(cfg.output / ".gpl.lock"));
  const auto summary = load_eval_summary(cfg.output);
  CHECK(summary.f1 > 0.5);

  const auto before = artifacts(cfg.output);
  const auto second = p.run(Stage::All);
  for (const auto& r : second) CHECK(r.skipped);
  CHECK(artifacts(cfg.output) == before);

  Pipeline forced(cfg, {.force = true});
  const auto graph = forced.run(Stage::Graph);
  CHECK_FALSE(graph[0].skipped);
  CHECK(artifacts(cfg.output) == before);

  // a changed embed setting reruns embed but not graph
  auto changed = cfg;
  changed.train.seed = 7;
  Pipeline q(changed);
  CHECK(q.run(Stage::Graph)[0].skipped);
  CHECK_FALSE(q.run(Stage::Embed)[0].skipped);
  // and downstream stages now see different inputs
  CHECK_FALSE(q.run(Stage::Cluster)[0].skipped);
}

TEST_CASE("pipeline: tampered output is regenerated") {
  test::TempDir dir("tamper");
  const auto cfg = small_task(dir.path(), 2);
  Pipeline p(cfg);
  p.run(Stage::Filter);
  p.run(Stage::Graph);
  { std::ofstream(cfg.output / "graph" / "edges.csv", std::ios::app) << "junk\n"; }
  CHECK_FALSE(p.run(Stage::Graph)[0].skipped);
}

TEST_CASE("pipeline: missing prerequisites and annotations") {
  test::TempDir dir("missing");
  const auto cfg = small_task(dir.path(), 2);
  Pipeline p(cfg);
  CHECK(code_of([&] { p.run(Stage::Embed); }) == ErrorCode::MissingArtifact);

  auto man = load_manifest(cfg.manifest);
  man.entries[1].annotations.reset();
  { std::ofstream(cfg.manifest) << format_manifest(man, cfg.manifest.parent_path()); }
  p.run(Stage::Filter);
  p.run(Stage::Graph);
  p.run(Stage::Embed);
  p.run(Stage::Cluster);
  try {
    p.run(Stage::Eval);
    FAIL("expected MissingArtifact");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingArtifact);
    CHECK(std::string(e.what()).find("video_01.ugf") != std::string::npos);
  }
}

TEST_CASE("pipeline: lock file blocks a second run") {
  test::TempDir dir("lock");
  const auto cfg = small_task(dir.path(), 2);
  fs::create_directories(cfg.output);
  { std::ofstream(cfg.output / ".gpl.lock") << "busy"; }
  Pipeline p(cfg);
  CHECK(code_of([&] { p.run(Stage::Filter); }) == ErrorCode::ConfigError);
  fs::remove(cfg.output / ".gpl.lock");
  CHECK_NOTHROW(p.run(Stage::Filter));
}

TEST_CASE("pipeline: sampler mismatch is a data error") {
  test::TempDir dir("sampler");
  auto cfg = small_task(dir.path(), 2);
  cfg.sampler = SamplerConfig{1, 4, 8};
  Pipeline p(cfg);
  CHECK(code_of([&] { p.run(Stage::Filter); }) == ErrorCode::RangeError);
}
