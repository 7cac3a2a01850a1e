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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gpl/unity_graph.hpp"

namespace gpl {

struct EdgeRecord {
  NodeId a;
  NodeId b;
  EdgeKind kind = EdgeKind::Temporal;
  double weight = 1.0;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

// Edge CSV: src_video,src_clip,dst_video,dst_clip,kind,weight with a < b,
// sorted lexicographically. Weights use shortest round-trip formatting.
std::string format_edges_csv(const UnityGraph& g);
std::vector<EdgeRecord> parse_edges_csv(const std::string& text, const std::string& source);

// Node CSV: node,video,clip,time.  Video CSV: video,video_id.
std::string format_nodes_csv(const UnityGraph& g);
std::string format_videos_csv(const UnityGraph& g);

// N, E, per-kind counts and degree histogram as JSON.
std::string format_graph_stats(const UnityGraph& g);
std::map<std::size_t, std::size_t> degree_histogram(const UnityGraph& g);

// Writes videos.csv, nodes.csv, edges.csv and stats.json under `dir`.
void write_graph(const UnityGraph& g, const std::filesystem::path& dir);
// Topology-only graph (no embeddings) from the files written by write_graph.
UnityGraph read_graph(const std::filesystem::path& dir);

std::string format_double(double v);
double parse_double(std::string_view s, const std::string& where);

}  // namespace gpl
