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

namespace gpl {

struct ManifestEntry {
  std::filesystem::path features;
  std::optional<std::filesystem::path> annotations;
  std::optional<std::filesystem::path> mask;
};

// One task: the videos to process together and the hypothesized number of
// key-steps K. Relative paths are resolved against the manifest directory.
struct TaskManifest {
  std::string task_name;
  std::uint32_t K = 0;
  std::optional<SamplerConfig> sampler;
  bool egocentric = false;
  std::vector<ManifestEntry> entries;

  // Throws ConfigError. Returns a warning message for single-video tasks.
  std::optional<std::string> validate() const;
};

// JSON:
// {"task_name": "...", "K": 4, "egocentric": true,
//  "sampler": {"sigma": 1, "omega": 8, "psi": 8},
//  "videos": [{"features": "f.ugf", "annotations": "a.csv", "mask": "m.ugm"}]}
TaskManifest parse_manifest(const std::string& json_text,
                            const std::filesystem::path& base_dir);
TaskManifest load_manifest(const std::filesystem::path& path);
std::string format_manifest(const TaskManifest& manifest,
                            const std::filesystem::path& base_dir);

}  // namespace gpl
