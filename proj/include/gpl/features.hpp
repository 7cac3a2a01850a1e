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

#include "gpl/clip_span.hpp"
#include "gpl/matrix.hpp"

namespace gpl {

// Clip-level embeddings of one video as produced by an external feature
// extractor. Row i of `embeddings` belongs to spans[i].
struct VideoFeatures {
  std::string video_id;
  std::uint32_t m = 0;  // frame count
  float fps = 0.0f;
  std::vector<ClipSpan> spans;
  Matrix embeddings;  // z x d

  std::size_t z() const noexcept { return spans.size(); }
  std::size_t d() const noexcept { return embeddings.cols(); }

  // Throws DimensionError / RangeError / ZeroVector / FormatError.
  void validate() const;

  friend bool operator==(const VideoFeatures&, const VideoFeatures&) = default;
};

// UGF1 format. Clip indices are implied by record order, so a filtered
// video written to disk is renumbered from 0.
std::vector<char> encode_features(const VideoFeatures& vf);
VideoFeatures decode_features(std::vector<char> bytes, const std::string& source);

void write_features(const VideoFeatures& vf, const std::filesystem::path& path);
VideoFeatures load_features(const std::filesystem::path& path);

}  // namespace gpl
