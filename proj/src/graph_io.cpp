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


#include "gpl/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "binary_io.hpp"
#include "gpl/error.hpp"
#include "text_util.hpp"

namespace gpl {

namespace {
constexpr std::string_view kEdgeHeader = "src_video,src_clip,dst_video,dst_clip,kind,weight";
constexpr std::string_view kNodeHeader = "node,video,clip,time";
constexpr std::string_view kVideoHeader = "video,video_id";

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  return {bytes.begin(), bytes.end()};
}

void expect_header(const std::vector<std::string_view>& rows, std::string_view header,
                   const std::string& source) {
  if (rows.empty() || rows.front() != header) {
    throw Error(ErrorCode::FormatError,
                source + ": expected header '" + std::string(header) + "'");
  }
}
}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw Error(ErrorCode::FormatError, where + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::string format_edges_csv(const UnityGraph& g) {
  std::string out(kEdgeHeader);
  out += '\n';
  const auto& nodes = g.nodes();
  for (const auto& e : g.edges()) {
    const auto& a = nodes[e.a];
    const auto& b = nodes[e.b];
    out += std::to_string(a.video) + ',' + std::to_string(a.clip) + ',' +
           std::to_string(b.video) + ',' + std::to_string(b.clip) + ',' +
           edge_kind_code(e.kind) + ',' + format_double(e.weight) + '\n';
  }
  return out;
}

std::vector<EdgeRecord> parse_edges_csv(const std::string& text, const std::string& source) {
  const auto rows = detail::lines(text);
  expect_header(rows, kEdgeHeader, source);
  std::vector<EdgeRecord> edges;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = source + ":" + std::to_string(r + 1);
    const auto f = detail::split(rows[r]);
    if (f.size() != 6) throw Error(ErrorCode::FormatError, where + ": expected 6 columns");
    EdgeRecord e;
    e.a = {detail::parse_int<std::uint32_t>(f[0], where),
           detail::parse_int<std::uint32_t>(f[1], where)};
    e.b = {detail::parse_int<std::uint32_t>(f[2], where),
           detail::parse_int<std::uint32_t>(f[3], where)};
    if (f[4] == "S") {
      e.kind = EdgeKind::Spatial;
    } else if (f[4] == "T") {
      e.kind = EdgeKind::Temporal;
    } else {
      throw Error(ErrorCode::FormatError, where + ": kind must be S or T");
    }
    e.weight = parse_double(f[5], where);
    if (!(e.a < e.b)) throw Error(ErrorCode::FormatError, where + ": edge not in a<b order");
    edges.push_back(e);
  }
  return edges;
}

std::string format_nodes_csv(const UnityGraph& g) {
  std::string out(kNodeHeader);
  out += '\n';
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& n = g.nodes()[i];
    out += std::to_string(i) + ',' + std::to_string(n.video) + ',' + std::to_string(n.clip) +
           ',' + format_double(g.times()[i]) + '\n';
  }
  return out;
}

std::string format_videos_csv(const UnityGraph& g) {
  std::string out(kVideoHeader);
  out += '\n';
  for (std::size_t i = 0; i < g.video_count(); ++i) {
    out += std::to_string(i) + ',' + g.video_ids()[i] + '\n';
  }
  return out;
}

std::map<std::size_t, std::size_t> degree_histogram(const UnityGraph& g) {
  std::map<std::size_t, std::size_t> hist;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) ++hist[g.degree(v)];
  return hist;
}

std::string format_graph_stats(const UnityGraph& g) {
  nlohmann::ordered_json j;
  j["videos"] = g.video_count();
  j["nodes"] = g.node_count();
  j["edges"] = g.edge_count();
  j["spatial_edges"] = g.count(EdgeKind::Spatial);
  j["temporal_edges"] = g.count(EdgeKind::Temporal);
  j["directed_spatial_picks"] = g.build_stats.directed_picks;
  j["mutual_spatial_picks"] = g.build_stats.mutual_picks;
  j["similarity_evaluations"] = g.build_stats.similarity_evaluations;
  auto hist = nlohmann::ordered_json::object();
  for (const auto& [deg, count] : degree_histogram(g)) hist[std::to_string(deg)] = count;
  j["degree_histogram"] = hist;
  return j.dump(2) + "\n";
}

void write_graph(const UnityGraph& g, const std::filesystem::path& dir) {
  if (g.node_count() == 0) throw Error(ErrorCode::RangeError, "refusing to write an empty graph");
  detail::write_text(dir / "videos.csv", format_videos_csv(g));
  detail::write_text(dir / "nodes.csv", format_nodes_csv(g));
  detail::write_text(dir / "edges.csv", format_edges_csv(g));
  detail::write_text(dir / "stats.json", format_graph_stats(g));
}

UnityGraph read_graph(const std::filesystem::path& dir) {
  std::vector<std::string> video_ids;
  {
    const auto source = (dir / "videos.csv").string();
    const auto text = read_text(dir / "videos.csv");
    const auto rows = detail::lines(text);
    expect_header(rows, kVideoHeader, source);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto f = detail::split(rows[r]);
      const std::string where = source + ":" + std::to_string(r + 1);
      if (f.size() != 2 || detail::parse_int<std::size_t>(f[0], where) != r - 1) {
        throw Error(ErrorCode::FormatError, where + ": malformed video row");
      }
      video_ids.emplace_back(f[1]);
    }
  }
  std::vector<NodeId> nodes;
  std::vector<double> times;
  {
    const auto source = (dir / "nodes.csv").string();
    const auto text = read_text(dir / "nodes.csv");
    const auto rows = detail::lines(text);
    expect_header(rows, kNodeHeader, source);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto f = detail::split(rows[r]);
      const std::string where = source + ":" + std::to_string(r + 1);
      if (f.size() != 4 || detail::parse_int<std::size_t>(f[0], where) != r - 1) {
        throw Error(ErrorCode::FormatError, where + ": malformed node row");
      }
      nodes.push_back({detail::parse_int<std::uint32_t>(f[1], where),
                       detail::parse_int<std::uint32_t>(f[2], where)});
      times.push_back(parse_double(f[3], where));
    }
  }
  const auto source = (dir / "edges.csv").string();
  const auto records = parse_edges_csv(read_text(dir / "edges.csv"), source);
  std::vector<Edge> edges;
  edges.reserve(records.size());
  const auto lookup = [&](NodeId id) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
    if (it == nodes.end() || *it != id) {
      throw Error(ErrorCode::FormatError,
                  source + ": edge refers to unknown node " + std::to_string(id.video) + ":" +
                      std::to_string(id.clip));
    }
    return static_cast<std::uint32_t>(it - nodes.begin());
  };
  for (const auto& r : records) edges.push_back({lookup(r.a), lookup(r.b), r.kind, r.weight});
  return UnityGraph(std::move(video_ids), std::move(nodes), std::move(times), std::move(edges));
}

}  // namespace gpl
