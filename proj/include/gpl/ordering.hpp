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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gpl {

enum class OrderingMode { Global, PerVideo, Both };

struct ClusterOrder {
  std::vector<std::uint32_t> order;  // non-empty clusters, ascending average time
  std::vector<std::optional<double>> avg_time;  // indexed by cluster id
  std::vector<std::uint32_t> empty_clusters;
};

struct VideoOrder {
  std::string video_id;
  ClusterOrder clusters;
};

struct KeyStepResult {
  std::uint32_t k = 0;
  std::optional<ClusterOrder> global;
  std::vector<VideoOrder> per_video;
};

// Orders clusters by the arithmetic mean of their members' normalized times.
// Equal means go to the lower cluster id; empty clusters are left out and
// listed separately.
ClusterOrder order_clusters(std::span<const std::uint32_t> assignments,
                            std::span<const double> times, std::uint32_t k);

// `video_of[i]` indexes `video_ids` for node i. Per-video orders only average
// that video's members.
KeyStepResult order_keysteps(std::span<const std::uint32_t> assignments,
                             std::span<const double> times,
                             std::span<const std::uint32_t> video_of,
                             const std::vector<std::string>& video_ids, std::uint32_t k,
                             OrderingMode mode = OrderingMode::Both);

// "global 2:0.1250 0:0.4000 ..." then one "video <id> ..." line per video.
std::string format_order_report(const std::string& task_name, const KeyStepResult& result);

}  // namespace gpl
