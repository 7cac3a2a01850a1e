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


#include "gpl/unity_graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "gpl/error.hpp"

namespace gpl {

namespace {

double squared_norm(std::span<const float> u) {
  double s = 0.0;
  for (float x : u) s += static_cast<double>(x) * static_cast<double>(x);
  return s;
}

double dot(std::span<const float> u, std::span<const float> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    s += static_cast<double>(u[j]) * static_cast<double>(v[j]);
  }
  return s;
}

// sqrt(a*a) == a in IEEE arithmetic, so identical vectors give exactly 1.
double cosine_from_parts(double uv, double uu, double vv) {
  return std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0);
}

std::vector<double> row_norms(const VideoFeatures& vf) {
  std::vector<double> norms(vf.z());
  for (std::size_t i = 0; i < vf.z(); ++i) {
    norms[i] = squared_norm(vf.embeddings.row(i));
    if (norms[i] == 0.0) {
      throw Error(ErrorCode::ZeroVector,
                  vf.video_id + ": clip " + std::to_string(vf.spans[i].clip_index) +
                      " has a zero embedding");
    }
  }
  return norms;
}

}  // namespace

char edge_kind_code(EdgeKind kind) { return kind == EdgeKind::Spatial ? 'S' : 'T'; }

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimensionError, "cosine_similarity: dimension mismatch");
  }
  const double uu = squared_norm(u);
  const double vv = squared_norm(v);
  if (uu == 0.0 || vv == 0.0) {
    throw Error(ErrorCode::ZeroVector, "cosine_similarity: zero-length vector");
  }
  return cosine_from_parts(dot(u, v), uu, vv);
}

std::vector<SpatialPick> spatial_picks(const VideoFeatures& src, const VideoFeatures& dst,
                                       std::uint64_t* evaluations) {
  if (src.d() != dst.d()) {
    throw Error(ErrorCode::DimensionError,
                src.video_id + " and " + dst.video_id + " have different embedding sizes");
  }
  const auto src_norms = row_norms(src);
  const auto dst_norms = row_norms(dst);
  std::vector<SpatialPick> picks;
  picks.reserve(src.z());
  for (std::size_t i = 0; i < src.z(); ++i) {
    const auto u = src.embeddings.row(i);
    std::size_t best = 0;
    double best_sim = -2.0;
    for (std::size_t j = 0; j < dst.z(); ++j) {
      const double sim = cosine_from_parts(dot(u, dst.embeddings.row(j)), src_norms[i],
                                           dst_norms[j]);
      // dst rows ascend by clip index: strict > keeps the lowest on ties
      if (sim > best_sim) {
        best_sim = sim;
        best = j;
      }
    }
    picks.push_back({src.spans[i].clip_index, dst.spans[best].clip_index, best_sim});
  }
  if (evaluations) *evaluations += std::uint64_t{src.z()} * dst.z();
  return picks;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> temporal_pairs(
    const VideoFeatures& video) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::size_t i = 1; i < video.spans.size(); ++i) {
    pairs.emplace_back(video.spans[i - 1].clip_index, video.spans[i].clip_index);
  }
  return pairs;
}

UnityGraph::UnityGraph(std::vector<std::string> video_ids, std::vector<NodeId> nodes,
                       std::vector<double> times, std::vector<Edge> edges,
                       Matrix embeddings)
    : video_ids_(std::move(video_ids)),
      nodes_(std::move(nodes)),
      times_(std::move(times)),
      edges_(std::move(edges)),
      embeddings_(std::move(embeddings)) {
  const auto n = nodes_.size();
  if (times_.size() != n) {
    throw Error(ErrorCode::DimensionError, "graph: times and nodes differ in length");
  }
  if (!embeddings_.empty() && embeddings_.rows() != n) {
    throw Error(ErrorCode::DimensionError, "graph: embeddings and nodes differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes_[i].video >= video_ids_.size()) {
      throw Error(ErrorCode::RangeError, "graph: node refers to unknown video");
    }
    if (i > 0 && !(nodes_[i - 1] < nodes_[i])) {
      throw Error(ErrorCode::FormatError, "graph: nodes must be unique and sorted");
    }
  }
  for (auto& e : edges_) {
    if (e.a == e.b) throw Error(ErrorCode::FormatError, "graph: self loop");
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.b >= n) throw Error(ErrorCode::RangeError, "graph: edge ordinal out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::FormatError, "graph: edge weight must be positive");
    }
    const bool same_video = nodes_[e.a].video == nodes_[e.b].video;
    if (same_video != (e.kind == EdgeKind::Temporal)) {
      throw Error(ErrorCode::FormatError,
                  "graph: temporal edges must stay within a video, spatial edges must not");
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b, x.kind) < std::tie(y.a, y.b, y.kind);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i - 1].a == edges_[i].a && edges_[i - 1].b == edges_[i].b) {
      throw Error(ErrorCode::FormatError, "graph: duplicate edge");
    }
  }

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges_) {
    ++degree[e.a];
    ++degree[e.b];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adj_.resize(offsets_[n]);
  adj_weight_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adj_[fill[e.a]] = e.b;
    adj_weight_[fill[e.a]++] = e.weight;
    adj_[fill[e.b]] = e.a;
    adj_weight_[fill[e.b]++] = e.weight;
  }
  // sort each adjacency list by neighbor ordinal
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::pair<std::uint32_t, double>> tmp;
    for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) tmp.emplace_back(adj_[k], adj_weight_[k]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t k = 0; k < tmp.size(); ++k) {
      adj_[offsets_[v] + k] = tmp[k].first;
      adj_weight_[offsets_[v] + k] = tmp[k].second;
    }
  }
}

std::size_t UnityGraph::count(EdgeKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [kind](const Edge& e) { return e.kind == kind; }));
}

std::optional<std::uint32_t> UnityGraph::ordinal(NodeId id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

std::span<const std::uint32_t> UnityGraph::neighbors(std::uint32_t v) const {
  return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const double> UnityGraph::neighbor_weights(std::uint32_t v) const {
  return {adj_weight_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool UnityGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

UnityGraph build_unity_graph(std::span<const VideoFeatures> videos,
                             const GraphBuildOptions& options) {
  if (videos.empty()) throw Error(ErrorCode::RangeError, "graph: no videos");
  const std::size_t n = videos.size();
  const std::size_t d = videos.front().d();

  std::vector<std::string> video_ids;
  std::vector<NodeId> nodes;
  std::vector<double> times;
  std::vector<std::uint32_t> first_ordinal(n);
  Matrix embeddings;
  std::size_t total = 0;
  for (const auto& v : videos) total += v.z();
  embeddings = Matrix(total, d);

  for (std::size_t vi = 0; vi < n; ++vi) {
    const auto& v = videos[vi];
    if (v.z() == 0) throw Error(ErrorCode::RangeError, v.video_id + ": no kept clips");
    if (v.d() != d) {
      throw Error(ErrorCode::DimensionError, v.video_id + ": embedding size differs");
    }
    first_ordinal[vi] = static_cast<std::uint32_t>(nodes.size());
    for (std::size_t i = 0; i < v.z(); ++i) {
      if (i > 0 && v.spans[i].clip_index <= v.spans[i - 1].clip_index) {
        throw Error(ErrorCode::FormatError, v.video_id + ": clips not in ascending order");
      }
      const auto row = v.embeddings.row(i);
      std::copy(row.begin(), row.end(), embeddings.row(nodes.size()).begin());
      nodes.push_back({static_cast<std::uint32_t>(vi), v.spans[i].clip_index});
      times.push_back(normalized_time(v.spans[i], v.m));
    }
    video_ids.push_back(v.video_id);
  }

  // position of a clip within its video's kept sequence
  const auto ordinal_of = [&](std::size_t vi, std::uint32_t clip) {
    const auto& spans = videos[vi].spans;
    const auto it = std::lower_bound(
        spans.begin(), spans.end(), clip,
        [](const ClipSpan& s, std::uint32_t c) { return s.clip_index < c; });
    return first_ordinal[vi] + static_cast<std::uint32_t>(it - spans.begin());
  };

  std::vector<Edge> edges;
  for (std::size_t vi = 0; vi < n; ++vi) {
    for (const auto& [a, b] : temporal_pairs(videos[vi])) {
      edges.push_back({ordinal_of(vi, a), ordinal_of(vi, b), EdgeKind::Temporal, 1.0});
    }
  }

  // one task per ordered pair (i, j), i != j; results land in fixed slots
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) tasks.emplace_back(i, j);
  std::vector<std::vector<SpatialPick>> picks(tasks.size());
  std::vector<std::uint64_t> evals(tasks.size(), 0);

  const auto run = [&](std::size_t t) {
    const auto [i, j] = tasks[t];
    picks[t] = spatial_picks(videos[i], videos[j], &evals[t]);
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(tasks.size())));
  if (threads <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) run(t);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  GraphBuildStats stats;
  std::vector<Edge> spatial;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto [i, j] = tasks[t];
    stats.similarity_evaluations += evals[t];
    for (const auto& p : picks[t]) {
      auto a = ordinal_of(i, p.src_clip);
      auto b = ordinal_of(j, p.dst_clip);
      if (a > b) std::swap(a, b);
      const double w = options.spatial_weight == SpatialWeight::Cosine
                           ? std::max(p.similarity, 1e-6)
                           : 1.0;
      spatial.push_back({a, b, EdgeKind::Spatial, w});
      ++stats.directed_picks;
    }
  }
  std::sort(spatial.begin(), spatial.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  for (std::size_t k = 0; k < spatial.size(); ++k) {
    if (k > 0 && spatial[k].a == spatial[k - 1].a && spatial[k].b == spatial[k - 1].b) {
      ++stats.mutual_picks;
      continue;
    }
    edges.push_back(spatial[k]);
  }

  UnityGraph g(std::move(video_ids), std::move(nodes), std::move(times), std::move(edges),
               std::move(embeddings));
  g.build_stats = stats;
  return g;
}

}  // namespace gpl
