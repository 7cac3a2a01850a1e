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


#include "gpl/ordering.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "gpl/error.hpp"

namespace gpl {

ClusterOrder order_clusters(std::span<const std::uint32_t> assignments,
                            std::span<const double> times, std::uint32_t k) {
  if (assignments.size() != times.size()) {
    throw Error(ErrorCode::LengthMismatch, "ordering: assignments and times differ in length");
  }
  std::vector<double> sums(k, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const auto c = assignments[i];
    if (c >= k) throw Error(ErrorCode::RangeError, "ordering: cluster id out of range");
    if (!(times[i] >= 0.0 && times[i] <= 1.0)) {
      throw Error(ErrorCode::RangeError, "ordering: normalized time outside [0,1]");
    }
    sums[c] += times[i];
    ++counts[c];
  }
  ClusterOrder out;
  out.avg_time.resize(k);
  for (std::uint32_t c = 0; c < k; ++c) {
    if (counts[c] == 0) {
      out.empty_clusters.push_back(c);
      continue;
    }
    out.avg_time[c] = sums[c] / static_cast<double>(counts[c]);
    out.order.push_back(c);
  }
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return *out.avg_time[a] < *out.avg_time[b];
  });
  return out;
}

KeyStepResult order_keysteps(std::span<const std::uint32_t> assignments,
                             std::span<const double> times,
                             std::span<const std::uint32_t> video_of,
                             const std::vector<std::string>& video_ids, std::uint32_t k,
                             OrderingMode mode) {
  if (video_of.size() != assignments.size()) {
    throw Error(ErrorCode::LengthMismatch, "ordering: video index and assignments differ");
  }
  KeyStepResult result;
  result.k = k;
  if (mode != OrderingMode::PerVideo) result.global = order_clusters(assignments, times, k);
  if (mode == OrderingMode::Global) return result;

  for (std::uint32_t v = 0; v < video_ids.size(); ++v) {
    std::vector<std::uint32_t> a;
    std::vector<double> t;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
      if (video_of[i] != v) continue;
      a.push_back(assignments[i]);
      t.push_back(times[i]);
    }
    result.per_video.push_back({video_ids[v], order_clusters(a, t, k)});
  }
  return result;
}

namespace {
std::string format_line(const ClusterOrder& order) {
  std::string out;
  char buf[64];
  for (const auto c : order.order) {
    std::snprintf(buf, sizeof(buf), " %u:%.4f", c, *order.avg_time[c]);
    out += buf;
  }
  if (!order.empty_clusters.empty()) {
    out += " | empty";
    for (const auto c : order.empty_clusters) out += ' ' + std::to_string(c);
  }
  return out;
}
}  // namespace

std::string format_order_report(const std::string& task_name, const KeyStepResult& result) {
  std::string out = "task " + task_name + "\n";
  out += "clusters " + std::to_string(result.k) + "\n";
  if (result.global) out += "global" + format_line(*result.global) + "\n";
  for (const auto& v : result.per_video) out += "video " + v.video_id + format_line(v.clusters) + "\n";
  return out;
}

}  // namespace gpl
