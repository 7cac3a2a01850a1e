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

namespace gpl {

struct Segment {
  std::uint32_t start_frame = 0;
  std::uint32_t end_frame = 0;  // exclusive
  std::uint32_t keystep_id = 0;  // >= 1
  std::string keystep_name;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// Annotated key-step segments of one video. Frames not covered by any
// segment are background (label 0).
struct GroundTruth {
  std::string video_id;
  std::vector<Segment> segments;  // sorted by start_frame, non-overlapping

  std::uint32_t max_keystep_id() const;

  // Per-frame labels of length m; throws RangeError if a segment exceeds m.
  std::vector<std::int32_t> frame_labels(std::uint32_t m) const;
};

// CSV header: start_frame,end_frame,keystep_id,keystep_name
GroundTruth parse_annotations(const std::string& text, const std::string& source,
                              std::optional<std::uint32_t> m = std::nullopt);
GroundTruth load_annotations(const std::filesystem::path& path,
                             std::optional<std::uint32_t> m = std::nullopt);
std::string format_annotations(const GroundTruth& gt);
void write_annotations(const GroundTruth& gt, const std::filesystem::path& path);

}  // namespace gpl
