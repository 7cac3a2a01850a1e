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


#include "gpl/clip_span.hpp"

#include <algorithm>
#include <string>

#include "gpl/error.hpp"

namespace gpl {

void SamplerConfig::validate() const {
  if (sigma == 0 || omega == 0 || psi == 0) {
    throw Error(ErrorCode::ConfigError,
                "sampler sigma, omega and psi must all be >= 1");
  }
}

ClipSpan make_span(std::uint32_t clip_index, std::uint32_t start,
                   std::uint32_t end) {
  // floor((start + end - 1) / 2) without overflow
  const std::uint32_t mid =
      start + static_cast<std::uint32_t>((std::uint64_t{end} - start - 1) / 2);
  return {clip_index, start, end, mid};
}

std::vector<ClipSpan> compute_clip_spans(std::uint32_t m,
                                         const SamplerConfig& cfg) {
  cfg.validate();
  if (m == 0) throw Error(ErrorCode::RangeError, "frame count must be >= 1");

  const std::uint64_t sampled = m / cfg.sigma;
  if (sampled < cfg.psi) {
    throw Error(ErrorCode::ZeroClips,
                std::to_string(sampled) + " sampled frames is shorter than window " +
                    std::to_string(cfg.psi));
  }
  const std::uint64_t z = (sampled - cfg.psi) / cfg.omega + 1;
  const std::uint64_t step = std::uint64_t{cfg.omega} * cfg.sigma;
  const std::uint64_t width = std::uint64_t{cfg.psi} * cfg.sigma;

  std::vector<ClipSpan> spans;
  spans.reserve(z);
  for (std::uint64_t i = 0; i < z; ++i) {
    const std::uint64_t start = i * step;
    const std::uint64_t end = std::min<std::uint64_t>(start + width, m);
    spans.push_back(make_span(static_cast<std::uint32_t>(i),
                              static_cast<std::uint32_t>(start),
                              static_cast<std::uint32_t>(end)));
  }
  return spans;
}

double normalized_time(const ClipSpan& span, std::uint32_t m) {
  return static_cast<double>(span.mid_frame) / static_cast<double>(m);
}

void validate_spans(const std::vector<ClipSpan>& spans, std::uint32_t m) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.start_frame >= s.end_frame || s.end_frame > m) {
      throw Error(ErrorCode::RangeError,
                  "clip " + std::to_string(i) + " span [" +
                      std::to_string(s.start_frame) + "," +
                      std::to_string(s.end_frame) + ") invalid for m=" +
                      std::to_string(m));
    }
    if (s.mid_frame != make_span(0, s.start_frame, s.end_frame).mid_frame) {
      throw Error(ErrorCode::RangeError,
                  "clip " + std::to_string(i) + " has inconsistent mid frame");
    }
    if (i > 0 && s.start_frame <= spans[i - 1].start_frame) {
      throw Error(ErrorCode::RangeError,
                  "clip starts must strictly increase (clip " +
                      std::to_string(i) + ")");
    }
  }
}

}  // namespace gpl
