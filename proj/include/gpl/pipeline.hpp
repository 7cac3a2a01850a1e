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


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gpl/clip_span.hpp"
#include "gpl/kmeans.hpp"
#include "gpl/node2vec.hpp"
#include "gpl/ordering.hpp"
#include "gpl/skipgram.hpp"
#include "gpl/unity_graph.hpp"

namespace gpl {

enum class Stage { Filter, Graph, Embed, Cluster, Order, Eval, All };

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

struct BackgroundConfig {
  std::optional<bool> enabled;  // unset: follow the manifest's egocentric flag
  double tau = 0.5;
};

struct ClusterConfig {
  std::optional<std::uint32_t> k;  // overrides the manifest's K
  std::uint32_t restarts = 10;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;  // explicit list wins over seed/restarts
  KMeansOptions kmeans;
};

// Everything one pipeline run needs. Paths are absolute after loading.
struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path output;
  std::optional<SamplerConfig> sampler;  // checked against feature-file spans
  BackgroundConfig background;
  SpatialWeight spatial_weight = SpatialWeight::Unit;
  WalkConfig walk;
  TrainConfig train;
  ClusterConfig cluster;
  OrderingMode ordering = OrderingMode::Both;
  bool deterministic = true;
  unsigned threads = 1;

  void validate() const;

  // Hash over the fields that influence `stage`'s artifacts; `All` hashes
  // every semantically meaningful field. Paths, threads and timing do not
  // participate.
  std::string hash(Stage stage = Stage::All) const;
};

PipelineConfig parse_pipeline_config(const std::string& json_text,
                                     const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
// Paths are written relative to base_dir.
std::string format_pipeline_config(const PipelineConfig& cfg, const std::filesystem::path& base_dir);

struct RunOptions {
  bool force = false;
  std::optional<unsigned> threads;
  std::optional<bool> deterministic;
};

struct StageResult {
  Stage stage;
  bool skipped = false;  // artifacts already matched inputs and config
  double wall_seconds = 0.0;
};

// Runs stages against one output directory. Each stage reads only files
// written by earlier stages (and the task's input files) and records its
// input/output hashes in <output>/<stage>/stage.json.
class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, RunOptions options = {});

  std::vector<StageResult> run(Stage stage);

  const PipelineConfig& config() const noexcept { return cfg_; }

 private:
  StageResult run_one(Stage stage);

  PipelineConfig cfg_;
  RunOptions options_;
};

struct EvalSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
  std::uint32_t matched_pairs = 0;
};

// Reads <output>/eval/summary.json.
EvalSummary load_eval_summary(const std::filesystem::path& output);

// Files excluded when comparing artifact trees across runs (wall-clock data).
const std::vector<std::string>& nondeterministic_artifacts();

}  // namespace gpl
