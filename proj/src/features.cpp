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


#include "gpl/features.hpp"

#include <algorithm>
#include <cmath>

#include "binary_io.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {
constexpr std::string_view kMagic = "UGF1";
constexpr std::uint32_t kVersion = 1;
}  // namespace

void VideoFeatures::validate() const {
  if (m == 0) throw Error(ErrorCode::FormatError, video_id + ": m must be >= 1");
  if (!(fps > 0.0f) || !std::isfinite(fps)) {
    throw Error(ErrorCode::FormatError, video_id + ": fps must be positive");
  }
  if (embeddings.cols() == 0) {
    throw Error(ErrorCode::FormatError, video_id + ": embedding dimension is 0");
  }
  if (spans.empty()) throw Error(ErrorCode::FormatError, video_id + ": no clips");
  if (embeddings.rows() != spans.size()) {
    throw Error(ErrorCode::DimensionError,
                video_id + ": " + std::to_string(embeddings.rows()) +
                    " embedding rows for " + std::to_string(spans.size()) + " clips");
  }
  validate_spans(spans, m);
  for (std::size_t i = 0; i < embeddings.rows(); ++i) {
    const auto row = embeddings.row(i);
    if (std::any_of(row.begin(), row.end(), [](float v) { return !std::isfinite(v); })) {
      throw Error(ErrorCode::FormatError,
                  video_id + ": non-finite value in clip " + std::to_string(i));
    }
    if (std::all_of(row.begin(), row.end(), [](float v) { return v == 0.0f; })) {
      throw Error(ErrorCode::ZeroVector,
                  video_id + ": clip " + std::to_string(i) + " embedding is all zeros");
    }
  }
}

std::vector<char> encode_features(const VideoFeatures& vf) {
  vf.validate();
  detail::ByteWriter w;
  w.magic(kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(vf.video_id.size()));
  w.raw(vf.video_id);
  w.u32(vf.m);
  w.f32(vf.fps);
  w.u32(static_cast<std::uint32_t>(vf.d()));
  w.u32(static_cast<std::uint32_t>(vf.z()));
  for (const auto& s : vf.spans) {
    w.u32(s.start_frame);
    w.u32(s.end_frame);
  }
  w.f32s(vf.embeddings.data());
  return w.bytes();
}

VideoFeatures decode_features(std::vector<char> bytes, const std::string& source) {
  detail::ByteReader r(std::move(bytes), source);
  r.expect_magic(kMagic);
  if (const auto version = r.u32("format_version"); version != kVersion) {
    throw Error(ErrorCode::FormatError,
                source + ": unsupported version " + std::to_string(version));
  }
  VideoFeatures vf;
  const auto id_len = r.u32("id_len");
  vf.video_id = r.raw(id_len, "video_id");
  vf.m = r.u32("m");
  vf.fps = r.f32("fps");
  const auto d = r.u32("d");
  const auto z = r.u32("z");
  if (d == 0) throw Error(ErrorCode::FormatError, source + ": d must be >= 1");
  if (z == 0) throw Error(ErrorCode::FormatError, source + ": z must be >= 1");
  if (r.remaining() < std::uint64_t{z} * 8) {
    throw Error(ErrorCode::DimensionError, source + ": span table truncated");
  }
  vf.spans.reserve(z);
  for (std::uint32_t i = 0; i < z; ++i) {
    const auto start = r.u32("span_start");
    const auto end = r.u32("span_end");
    if (start >= end) {
      throw Error(ErrorCode::RangeError,
                  source + ": clip " + std::to_string(i) + " has end <= start");
    }
    vf.spans.push_back(make_span(i, start, end));
  }
  const std::uint64_t payload = std::uint64_t{z} * d * 4;
  if (r.remaining() < payload) {
    throw Error(ErrorCode::DimensionError,
                source + ": expected " + std::to_string(payload) +
                    " embedding bytes (z*d*4), found " + std::to_string(r.remaining()));
  }
  vf.embeddings = Matrix(z, d);
  r.f32s(vf.embeddings.data(), "embeddings");
  r.expect_end();
  vf.validate();
  return vf;
}

void write_features(const VideoFeatures& vf, const std::filesystem::path& path) {
  detail::write_file(path, encode_features(vf));
}

VideoFeatures load_features(const std::filesystem::path& path) {
  return decode_features(detail::read_file(path), path.string());
}

}  // namespace gpl
