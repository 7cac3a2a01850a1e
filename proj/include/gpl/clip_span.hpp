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
#include <vector>

namespace gpl {

// Frames are subsampled every `sigma` frames, then a window of `psi` sampled
// frames slides by `omega` sampled frames. Each window is one clip.
struct SamplerConfig {
  std::uint32_t sigma = 1;
  std::uint32_t omega = 1;
  std::uint32_t psi = 1;

  void validate() const;
  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

// Raw-frame extent of one clip; end_frame is exclusive.
struct ClipSpan {
  std::uint32_t clip_index = 0;
  std::uint32_t start_frame = 0;
  std::uint32_t end_frame = 0;
  std::uint32_t mid_frame = 0;

  std::uint32_t length() const noexcept { return end_frame - start_frame; }
  friend bool operator==(const ClipSpan&, const ClipSpan&) = default;
};

ClipSpan make_span(std::uint32_t clip_index, std::uint32_t start,
                   std::uint32_t end);

// Throws ZeroClips when the subsampled video is shorter than one window.
std::vector<ClipSpan> compute_clip_spans(std::uint32_t m,
                                         const SamplerConfig& cfg);

// mid_frame / m.
double normalized_time(const ClipSpan& span, std::uint32_t m);

// Checks start < end <= m, mid_frame consistency and strictly increasing
// starts. Throws RangeError.
void validate_spans(const std::vector<ClipSpan>& spans, std::uint32_t m);

}  // namespace gpl
