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


#include "gpl/evaluation.hpp"

#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <limits>

#include "gpl/error.hpp"
#include "gpl/hungarian.hpp"

namespace gpl {

std::vector<std::int32_t> expand_to_frames(std::span<const std::int32_t> clip_labels,
                                           std::span<const ClipSpan> spans, std::uint32_t m) {
  if (clip_labels.size() != spans.size()) {
    throw Error(ErrorCode::LengthMismatch, "expand_to_frames: one label per span required");
  }
  std::vector<std::int32_t> labels(m, kUnlabeled);
  std::vector<std::uint32_t> best(m, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t c = 0; c < spans.size(); ++c) {
    const auto& s = spans[c];
    if (s.end_frame > m) throw Error(ErrorCode::RangeError, "expand_to_frames: span beyond m");
    for (std::uint32_t f = s.start_frame; f < s.end_frame; ++f) {
      const std::uint32_t dist = f > s.mid_frame ? f - s.mid_frame : s.mid_frame - f;
      if (dist < best[f]) {
        best[f] = dist;
        labels[f] = clip_labels[c];
      }
    }
  }
  return labels;
}

EvalReport evaluate_task(const std::vector<std::vector<std::int32_t>>& predicted,
                         const std::vector<std::vector<std::int32_t>>& ground_truth,
                         std::uint32_t k, std::uint32_t k_gt) {
  if (predicted.size() != ground_truth.size()) {
    throw Error(ErrorCode::LengthMismatch, "evaluate: video counts differ");
  }
  std::vector<std::uint64_t> overlap(std::size_t{k} * k_gt, 0);
  std::vector<std::uint64_t> pred_size(k, 0), gt_size(k_gt, 0);
  for (std::size_t v = 0; v < predicted.size(); ++v) {
    const auto& p = predicted[v];
    const auto& g = ground_truth[v];
    if (p.size() != g.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  "evaluate: video " + std::to_string(v) + " has " + std::to_string(p.size()) +
                      " predicted and " + std::to_string(g.size()) + " ground-truth frames");
    }
    for (std::size_t f = 0; f < p.size(); ++f) {
      const auto pc = p[f];
      const auto gs = g[f];
      if (pc < kUnlabeled || pc >= static_cast<std::int32_t>(k)) {
        throw Error(ErrorCode::RangeError, "evaluate: predicted label out of range");
      }
      if (gs < 0 || gs > static_cast<std::int32_t>(k_gt)) {
        throw Error(ErrorCode::RangeError, "evaluate: ground-truth label out of range");
      }
      if (pc >= 0) ++pred_size[pc];
      if (gs > 0) ++gt_size[gs - 1];
      if (pc >= 0 && gs > 0) ++overlap[std::size_t(pc) * k_gt + (gs - 1)];
    }
  }

  // Max total overlap. Among equally good matchings prefer the larger F1 sum so the
  // result does not depend on how clusters happen to be numbered; the bonus
  // sums to less than one frame of overlap.
  const double eps = 1.0 / (2.0 * (std::min(k, k_gt) + 1));
  MatrixD cost(k, k_gt);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t s = 0; s < k_gt; ++s) {
      const auto o = overlap[c * k_gt + s];
      const double f1 = o == 0 ? 0.0 : 2.0 * static_cast<double>(o) / static_cast<double>(pred_size[c] + gt_size[s]);
      cost(c, s) = -(static_cast<double>(o) + eps * f1);
    }
  }
  const auto match = hungarian(cost);

  EvalReport r;
  r.cluster_to_keystep.assign(k, std::nullopt);
  std::vector<std::optional<std::uint32_t>> keystep_to_cluster(k_gt);
  for (std::uint32_t c = 0; c < k; ++c) {
    const auto s = match.row_to_col[c];
    if (s < 0 || overlap[std::size_t(c) * k_gt + s] == 0) continue;
    r.cluster_to_keystep[c] = static_cast<std::uint32_t>(s) + 1;
    keystep_to_cluster[s] = c;
    ++r.matched_pairs;
  }

  std::size_t scored = 0;
  for (std::uint32_t s = 0; s < k_gt; ++s) {
    if (gt_size[s] == 0) continue;
    KeyStepScore ks;
    ks.keystep_id = s + 1;
    ks.gt_frames = gt_size[s];
    if (const auto c = keystep_to_cluster[s]) {
      ks.cluster = *c;
      ks.overlap = overlap[std::size_t(*c) * k_gt + s];
      ks.pred_frames = pred_size[*c];
      ks.precision = static_cast<double>(ks.overlap) / static_cast<double>(ks.pred_frames);
      ks.recall = static_cast<double>(ks.overlap) / static_cast<double>(ks.gt_frames);
      const double pr = ks.precision + ks.recall;
      ks.f1 = pr > 0.0 ? 2.0 * ks.precision * ks.recall / pr : 0.0;
      ks.iou = static_cast<double>(ks.overlap) /
               static_cast<double>(ks.pred_frames + ks.gt_frames - ks.overlap);
    }
    r.precision += ks.precision;
    r.recall += ks.recall;
    r.f1 += ks.f1;
    r.iou += ks.iou;
    ++scored;
    r.per_keystep.push_back(ks);
  }
  if (scored > 0) {
    const double n = static_cast<double>(scored);
    r.precision /= n;
    r.recall /= n;
    r.f1 /= n;
    r.iou /= n;
  }
  return r;
}

namespace {
std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}
}  // namespace

std::string format_eval_text(const std::string& task, const EvalReport& r) {
  std::string out;
  out += "# framewise evaluation, Hungarian max-overlap matching pooled over videos\n";
  out += "# metrics averaged over ground-truth key-steps (unmatched = 0)\n";
  out += "# ground-truth background never counts as overlap; it does count in cluster size\n";
  out += "task " + task + "\n";
  out += "precision " + fmt6(r.precision) + "\n";
  out += "recall " + fmt6(r.recall) + "\n";
  out += "f1 " + fmt6(r.f1) + "\n";
  out += "iou " + fmt6(r.iou) + "\n";
  out += "matched_pairs " + std::to_string(r.matched_pairs) + "\n";
  for (std::size_t c = 0; c < r.cluster_to_keystep.size(); ++c) {
    out += "match cluster " + std::to_string(c) + " -> " +
           (r.cluster_to_keystep[c] ? "keystep " + std::to_string(*r.cluster_to_keystep[c])
                                    : std::string("none")) +
           "\n";
  }
  return out;
}

std::string format_eval_csv(const std::string& task, const EvalReport& r) {
  return "task,precision,recall,f1,iou,matched_pairs\n" + task + "," + fmt6(r.precision) + "," +
         fmt6(r.recall) + "," + fmt6(r.f1) + "," + fmt6(r.iou) + "," +
         std::to_string(r.matched_pairs) + "\n";
}

std::string format_keystep_csv(const std::string& task, const EvalReport& r) {
  std::string out =
      "task,keystep_id,cluster,overlap,pred_frames,gt_frames,precision,recall,f1,iou\n";
  for (const auto& ks : r.per_keystep) {
    out += task + "," + std::to_string(ks.keystep_id) + "," +
           (ks.cluster ? std::to_string(*ks.cluster) : std::string("-1")) + "," +
           std::to_string(ks.overlap) + "," + std::to_string(ks.pred_frames) + "," +
           std::to_string(ks.gt_frames) + "," + fmt6(ks.precision) + "," + fmt6(ks.recall) +
           "," + fmt6(ks.f1) + "," + fmt6(ks.iou) + "\n";
  }
  return out;
}

}  // namespace gpl
