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


#include "gpl/annotations.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "binary_io.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {

constexpr std::string_view kHeader = "start_frame,end_frame,keystep_id,keystep_name";

std::uint32_t parse_u32(std::string_view field, const std::string& where) {
  std::uint32_t v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::FormatError, where + ": bad integer '" + std::string(field) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

}  // namespace

std::uint32_t GroundTruth::max_keystep_id() const {
  std::uint32_t k = 0;
  for (const auto& s : segments) k = std::max(k, s.keystep_id);
  return k;
}

std::vector<std::int32_t> GroundTruth::frame_labels(std::uint32_t m) const {
  std::vector<std::int32_t> labels(m, 0);
  for (const auto& s : segments) {
    if (s.end_frame > m) {
      throw Error(ErrorCode::RangeError,
                  video_id + ": segment ends at " + std::to_string(s.end_frame) +
                      " beyond m=" + std::to_string(m));
    }
    std::fill(labels.begin() + s.start_frame, labels.begin() + s.end_frame,
              static_cast<std::int32_t>(s.keystep_id));
  }
  return labels;
}

GroundTruth parse_annotations(const std::string& text, const std::string& source,
                              std::optional<std::uint32_t> m) {
  GroundTruth gt;
  gt.video_id = std::filesystem::path(source).stem().string();
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (row == kHeader) continue;
      throw Error(ErrorCode::FormatError,
                  source + ": expected header '" + std::string(kHeader) + "'");
    }
    const std::string where = source + ":" + std::to_string(lineno);
    std::size_t c1 = row.find(',');
    std::size_t c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    std::size_t c3 = c2 == std::string_view::npos ? c2 : row.find(',', c2 + 1);
    if (c3 == std::string_view::npos) {
      throw Error(ErrorCode::FormatError, where + ": expected 4 columns");
    }
    Segment seg;
    seg.start_frame = parse_u32(trim(row.substr(0, c1)), where);
    seg.end_frame = parse_u32(trim(row.substr(c1 + 1, c2 - c1 - 1)), where);
    seg.keystep_id = parse_u32(trim(row.substr(c2 + 1, c3 - c2 - 1)), where);
    seg.keystep_name = std::string(trim(row.substr(c3 + 1)));
    if (seg.end_frame <= seg.start_frame) {
      throw Error(ErrorCode::RangeError, where + ": end_frame <= start_frame");
    }
    if (m && seg.end_frame > *m) {
      throw Error(ErrorCode::RangeError,
                  where + ": end_frame beyond m=" + std::to_string(*m));
    }
    if (seg.keystep_id == 0) {
      throw Error(ErrorCode::RangeError, where + ": keystep_id must be >= 1");
    }
    gt.segments.push_back(std::move(seg));
  }
  std::stable_sort(gt.segments.begin(), gt.segments.end(),
                   [](const Segment& a, const Segment& b) {
                     return a.start_frame < b.start_frame;
                   });
  for (std::size_t i = 1; i < gt.segments.size(); ++i) {
    const auto& prev = gt.segments[i - 1];
    const auto& cur = gt.segments[i];
    if (cur.start_frame < prev.end_frame) {
      throw Error(ErrorCode::OverlapError,
                  source + ": segments [" + std::to_string(prev.start_frame) + "," +
                      std::to_string(prev.end_frame) + ") and [" +
                      std::to_string(cur.start_frame) + "," +
                      std::to_string(cur.end_frame) + ") overlap");
    }
  }
  return gt;
}

GroundTruth load_annotations(const std::filesystem::path& path,
                             std::optional<std::uint32_t> m) {
  const auto bytes = detail::read_file(path);
  return parse_annotations(std::string(bytes.begin(), bytes.end()), path.string(), m);
}

std::string format_annotations(const GroundTruth& gt) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& s : gt.segments) {
    out += std::to_string(s.start_frame) + ',' + std::to_string(s.end_frame) + ',' +
           std::to_string(s.keystep_id) + ',' + s.keystep_name + '\n';
  }
  return out;
}

void write_annotations(const GroundTruth& gt, const std::filesystem::path& path) {
  detail::write_text(path, format_annotations(gt));
}

}  // namespace gpl
