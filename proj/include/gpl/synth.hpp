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
#include <string>
#include <vector>

#include "gpl/annotations.hpp"
#include "gpl/background.hpp"
#include "gpl/features.hpp"

namespace gpl {

// A procedure with planted key-steps. Each key-step is a unit vector; clips
// of a step are noisy copies of it, background clips are isotropic noise.
struct SynthSpec {
  std::string task_name = "synth";
  std::uint32_t k_true = 4;
  std::uint32_t videos = 6;
  std::uint32_t clips_per_step_min = 4;
  std::uint32_t clips_per_step_max = 8;
  std::uint32_t dim = 32;
  double separation = 1.0;       // minimum distance between key-step centers
  double noise = 0.1;            // per-coordinate Gaussian std before renormalizing
  double background_fraction = 0.2;
  double jitter = 0.1;           // probability of swapping each adjacent step pair
  std::uint64_t seed = 42;
  std::uint32_t frames_per_clip = 8;
  float fps = 30.0f;

  void validate() const;
};

// K=4, n=6, d=32, s=1.0, noise=0.1, background=0.2, jitter=0.1, seed=42.
SynthSpec synth_a_spec();

struct SynthVideoStats {
  std::vector<std::uint32_t> step_order;  // 0-based key-step ids
  std::uint32_t step_clips = 0;
  std::uint32_t background_clips = 0;
};

struct SynthTask {
  SynthSpec spec;
  SamplerConfig sampler;
  std::vector<std::vector<double>> centers;
  std::vector<VideoFeatures> videos;
  std::vector<GroundTruth> annotations;
  std::vector<InteractionMask> masks;
  std::vector<SynthVideoStats> stats;
};

// Bit-deterministic per seed. Video i depends only on (seed, i), so tasks
// with fewer videos are prefixes of tasks with more. Throws
// InfeasibleSeparation when centers cannot be placed in 1e5 attempts.
SynthTask generate_task(const SynthSpec& spec);

// Task directory: manifest.json, synth_stats.json, features/, masks/,
// annotations/.
void write_task(const SynthTask& task, const std::filesystem::path& dir);

SynthSpec parse_synth_spec(const std::string& json_text);
std::string format_synth_spec(const SynthSpec& spec);

}  // namespace gpl
