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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpl/features.hpp"
#include "gpl/matrix.hpp"

namespace gpl {

struct NodeId {
  std::uint32_t video = 0;  // index into the task's video list
  std::uint32_t clip = 0;   // original clip index, before filtering

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class EdgeKind : std::uint8_t { Spatial, Temporal };

char edge_kind_code(EdgeKind kind);  // 'S' / 'T'

// Undirected edge between node ordinals, stored with a < b.
struct Edge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  EdgeKind kind = EdgeKind::Temporal;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class SpatialWeight { Unit, Cosine };

struct GraphBuildOptions {
  SpatialWeight spatial_weight = SpatialWeight::Unit;
  unsigned threads = 1;
};

struct GraphBuildStats {
  std::uint64_t similarity_evaluations = 0;
  std::uint64_t directed_picks = 0;
  std::uint64_t mutual_picks = 0;
};

// Cosine similarity in double precision, clamped to [-1, 1]. Throws ZeroVector.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

struct SpatialPick {
  std::uint32_t src_clip = 0;
  std::uint32_t dst_clip = 0;
  double similarity = 0.0;
};

// For every clip of `src`, the clip of `dst` with the highest cosine
// similarity. Equal similarities resolve to the lowest clip index.
// `evaluations`, if given, is incremented once per similarity computed.
std::vector<SpatialPick> spatial_picks(const VideoFeatures& src, const VideoFeatures& dst,
                                       std::uint64_t* evaluations = nullptr);

// Pairs of consecutive clip indices in the (possibly filtered) clip sequence.
std::vector<std::pair<std::uint32_t, std::uint32_t>> temporal_pairs(
    const VideoFeatures& video);

// All videos of one task as a single graph. Node ordinals follow NodeId order.
class UnityGraph {
 public:
  UnityGraph() = default;

  // Assembles a graph from explicit parts; edges are canonicalized and
  // checked for self loops, duplicates and out-of-range ordinals.
  UnityGraph(std::vector<std::string> video_ids, std::vector<NodeId> nodes,
             std::vector<double> times, std::vector<Edge> edges, Matrix embeddings = {});

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t video_count() const noexcept { return video_ids_.size(); }
  std::size_t count(EdgeKind kind) const;

  const std::vector<std::string>& video_ids() const noexcept { return video_ids_; }
  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Matrix& embeddings() const noexcept { return embeddings_; }

  std::optional<std::uint32_t> ordinal(NodeId id) const;

  // Neighbors sorted by ordinal, with matching weights.
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const;
  std::span<const double> neighbor_weights(std::uint32_t v) const;
  std::size_t degree(std::uint32_t v) const { return neighbors(v).size(); }
  bool has_edge(std::uint32_t a, std::uint32_t b) const;

  // Offset of v's adjacency in the flattened CSR arrays.
  std::size_t adjacency_offset(std::uint32_t v) const { return offsets_[v]; }
  std::size_t adjacency_size() const noexcept { return adj_.size(); }

  GraphBuildStats build_stats;

 private:
  std::vector<std::string> video_ids_;
  std::vector<NodeId> nodes_;
  std::vector<double> times_;
  std::vector<Edge> edges_;
  Matrix embeddings_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adj_;
  std::vector<double> adj_weight_;
};

// Temporal chains within every video plus argmax-cosine spatial picks for
// every ordered video pair, merged into one undirected simple graph.
// Pairwise similarity work is O(n^2 z^2 d) for n videos of z clips.
UnityGraph build_unity_graph(std::span<const VideoFeatures> videos,
                             const GraphBuildOptions& options = {});

}  // namespace gpl
