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

#include "gpl/features.hpp"

namespace gpl {

// Per-frame hand-object interaction flags from an external detector.
// Frames without interaction are background.
struct InteractionMask {
  std::string video_id;
  std::vector<bool> flags;  // length m

  std::uint32_t m() const noexcept { return static_cast<std::uint32_t>(flags.size()); }
};

// Accepts the binary UGM1 format or a text line of m '0'/'1' characters.
// Throws LengthMismatch when the frame count differs from expected_m.
InteractionMask load_mask(const std::filesystem::path& path, std::uint32_t expected_m);
InteractionMask decode_mask(const std::vector<char>& bytes, const std::string& source,
                            std::uint32_t expected_m);
std::vector<char> encode_mask(const InteractionMask& mask);
void write_mask(const InteractionMask& mask, const std::filesystem::path& path);

// Fraction of a clip's frames that show interaction.
double interaction_fraction(const ClipSpan& span, const InteractionMask& mask);

struct FilterResult {
  VideoFeatures kept;  // surviving clips with their original clip indices
  std::vector<std::uint32_t> kept_clips;
  std::vector<double> fractions;  // per original clip
  double removed_fraction = 0.0;
};

// Keeps a clip iff its interaction fraction >= tau. Spans and frame count are
// untouched, so normalized times stay relative to the full video. Throws
// AllClipsRemoved if nothing survives.
FilterResult filter_background(const VideoFeatures& vf, const InteractionMask& mask,
                               double tau);

// Restricts a video to the given clip indices (ascending, original numbering).
VideoFeatures select_clips(const VideoFeatures& vf,
                           const std::vector<std::uint32_t>& clip_indices);

}  // namespace gpl
