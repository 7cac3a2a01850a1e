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


#include "gpl/background.hpp"

#include <algorithm>

#include "binary_io.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {
constexpr std::string_view kMagic = "UGM1";
constexpr std::uint32_t kVersion = 1;

InteractionMask decode_text_mask(const std::vector<char>& bytes,
                                 const std::string& source) {
  InteractionMask mask;
  std::size_t end = bytes.size();
  while (end > 0 && (bytes[end - 1] == '\n' || bytes[end - 1] == '\r')) --end;
  mask.flags.reserve(end);
  for (std::size_t i = 0; i < end; ++i) {
    if (bytes[i] != '0' && bytes[i] != '1') {
      throw Error(ErrorCode::FormatError,
                  source + ": unexpected character at offset " + std::to_string(i));
    }
    mask.flags.push_back(bytes[i] == '1');
  }
  return mask;
}
}  // namespace

InteractionMask decode_mask(const std::vector<char>& bytes, const std::string& source,
                            std::uint32_t expected_m) {
  InteractionMask mask;
  if (bytes.size() >= 4 && std::string_view(bytes.data(), 4) == kMagic) {
    detail::ByteReader r(bytes, source);
    r.expect_magic(kMagic);
    if (const auto v = r.u32("version"); v != kVersion) {
      throw Error(ErrorCode::FormatError, source + ": unsupported version " + std::to_string(v));
    }
    const auto m = r.u32("m");
    if (m != expected_m) {
      throw Error(ErrorCode::LengthMismatch,
                  source + ": mask has " + std::to_string(m) + " frames, video has " +
                      std::to_string(expected_m));
    }
    const std::size_t nbytes = (std::size_t{m} + 7) / 8;
    if (r.remaining() != nbytes) {
      throw Error(ErrorCode::FormatError,
                  source + ": expected " + std::to_string(nbytes) + " mask bytes, found " +
                      std::to_string(r.remaining()));
    }
    mask.flags.resize(m);
    for (std::size_t b = 0; b < nbytes; ++b) {
      const auto byte = r.byte("bits");
      for (std::size_t bit = 0; bit < 8 && b * 8 + bit < m; ++bit) {
        mask.flags[b * 8 + bit] = (byte >> bit) & 1u;
      }
    }
  } else {
    mask = decode_text_mask(bytes, source);
    if (mask.m() != expected_m) {
      throw Error(ErrorCode::LengthMismatch,
                  source + ": mask has " + std::to_string(mask.m()) +
                      " frames, video has " + std::to_string(expected_m));
    }
  }
  mask.video_id = std::filesystem::path(source).stem().string();
  return mask;
}

InteractionMask load_mask(const std::filesystem::path& path, std::uint32_t expected_m) {
  return decode_mask(detail::read_file(path), path.string(), expected_m);
}

std::vector<char> encode_mask(const InteractionMask& mask) {
  detail::ByteWriter w;
  w.magic(kMagic);
  w.u32(kVersion);
  w.u32(mask.m());
  const std::size_t nbytes = (mask.flags.size() + 7) / 8;
  for (std::size_t b = 0; b < nbytes; ++b) {
    std::uint8_t byte = 0;
    for (std::size_t bit = 0; bit < 8 && b * 8 + bit < mask.flags.size(); ++bit) {
      if (mask.flags[b * 8 + bit]) byte |= static_cast<std::uint8_t>(1u << bit);
    }
    w.byte(byte);
  }
  return w.bytes();
}

void write_mask(const InteractionMask& mask, const std::filesystem::path& path) {
  detail::write_file(path, encode_mask(mask));
}

double interaction_fraction(const ClipSpan& span, const InteractionMask& mask) {
  std::uint32_t hits = 0;
  for (std::uint32_t f = span.start_frame; f < span.end_frame; ++f) hits += mask.flags[f];
  return static_cast<double>(hits) / static_cast<double>(span.length());
}

VideoFeatures select_clips(const VideoFeatures& vf,
                           const std::vector<std::uint32_t>& clip_indices) {
  VideoFeatures out;
  out.video_id = vf.video_id;
  out.m = vf.m;
  out.fps = vf.fps;
  out.embeddings = Matrix(clip_indices.size(), vf.d());
  std::size_t row = 0;
  for (const auto clip : clip_indices) {
    const auto it = std::find_if(vf.spans.begin(), vf.spans.end(),
                                 [&](const ClipSpan& s) { return s.clip_index == clip; });
    if (it == vf.spans.end()) {
      throw Error(ErrorCode::RangeError,
                  vf.video_id + ": no clip with index " + std::to_string(clip));
    }
    const auto src = vf.embeddings.row(static_cast<std::size_t>(it - vf.spans.begin()));
    std::copy(src.begin(), src.end(), out.embeddings.row(row++).begin());
    out.spans.push_back(*it);
  }
  return out;
}

FilterResult filter_background(const VideoFeatures& vf, const InteractionMask& mask,
                               double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "background tau must lie in [0,1]");
  }
  if (mask.m() != vf.m) {
    throw Error(ErrorCode::LengthMismatch,
                vf.video_id + ": mask length " + std::to_string(mask.m()) +
                    " != frame count " + std::to_string(vf.m));
  }
  FilterResult result;
  result.fractions.reserve(vf.z());
  for (const auto& span : vf.spans) {
    const double frac = interaction_fraction(span, mask);
    result.fractions.push_back(frac);
    if (frac >= tau) result.kept_clips.push_back(span.clip_index);
  }
  if (result.kept_clips.empty()) {
    throw Error(ErrorCode::AllClipsRemoved,
                vf.video_id + ": every clip is background at tau=" + std::to_string(tau));
  }
  result.removed_fraction =
      static_cast<double>(vf.z() - result.kept_clips.size()) / static_cast<double>(vf.z());
  result.kept = select_clips(vf, result.kept_clips);
  return result;
}

}  // namespace gpl
