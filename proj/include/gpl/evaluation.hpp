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

#include "gpl/clip_span.hpp"

namespace gpl {

inline constexpr std::int32_t kUnlabeled = -1;

// Frame labels from clip labels (kUnlabeled for filtered clips). A frame
// covered by several spans belongs to the span whose mid frame is nearest,
// the earlier clip on ties; uncovered frames stay kUnlabeled.
std::vector<std::int32_t> expand_to_frames(std::span<const std::int32_t> clip_labels,
                                           std::span<const ClipSpan> spans, std::uint32_t m);

struct KeyStepScore {
  std::uint32_t keystep_id = 0;
  std::optional<std::uint32_t> cluster;
  std::uint64_t overlap = 0;
  std::uint64_t pred_frames = 0;
  std::uint64_t gt_frames = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
};

struct EvalReport {
  std::vector<std::optional<std::uint32_t>> cluster_to_keystep;  // size K
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou = 0.0;
  std::uint32_t matched_pairs = 0;
  std::vector<KeyStepScore> per_keystep;  // ground-truth steps with frames
};

// Pools all videos of a task. Predicted labels are kUnlabeled or 0..K-1,
// ground truth is 0 (background) or 1..K_gt. Clusters are matched one-to-one
// to key-steps by maximum pooled overlap; metrics are averaged over every
// ground-truth key-step that has frames, unmatched steps scoring 0.
// Background frames never count as overlap but do count in the predicted
// cluster's size. Throws LengthMismatch.
EvalReport evaluate_task(const std::vector<std::vector<std::int32_t>>& predicted,
                         const std::vector<std::vector<std::int32_t>>& ground_truth,
                         std::uint32_t k, std::uint32_t k_gt);

std::string format_eval_text(const std::string& task, const EvalReport& r);
// task,precision,recall,f1,iou,matched_pairs
std::string format_eval_csv(const std::string& task, const EvalReport& r);
std::string format_keystep_csv(const std::string& task, const EvalReport& r);

}  // namespace gpl
