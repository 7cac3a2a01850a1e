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


#include "gpl/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "binary_io.hpp"
#include "gpl/annotations.hpp"
#include "gpl/background.hpp"
#include "gpl/embedding_io.hpp"
#include "gpl/error.hpp"
#include "gpl/evaluation.hpp"
#include "gpl/graph_io.hpp"
#include "gpl/hash.hpp"
#include "gpl/manifest.hpp"
#include "gpl/projection.hpp"
#include "text_util.hpp"

namespace gpl {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr Stage kOrder[] = {Stage::Filter, Stage::Graph, Stage::Embed,
                            Stage::Cluster, Stage::Order, Stage::Eval};

// ---------------------------------------------------------------- config

std::string_view to_string(SpatialWeight w) { return w == SpatialWeight::Cosine ? "cosine" : "unit"; }

std::string_view to_string(OrderingMode m) {
  switch (m) {
    case OrderingMode::Global: return "global";
    case OrderingMode::PerVideo: return "per_video";
    case OrderingMode::Both: return "both";
  }
  return "both";
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::ConfigError, where + ": unknown key '" + key + "'");
    }
  }
}

ojson sampler_json(const std::optional<SamplerConfig>& s) {
  if (!s) return nullptr;
  return ojson{{"sigma", s->sigma}, {"omega", s->omega}, {"psi", s->psi}};
}

ojson background_json(const BackgroundConfig& b) {
  ojson j;
  j["enabled"] = b.enabled ? ojson(*b.enabled) : ojson(nullptr);
  j["tau"] = b.tau;
  return j;
}

ojson walk_json(const WalkConfig& w) {
  return ojson{{"p", w.p},
               {"q", w.q},
               {"length", w.walk_length},
               {"walks_per_node", w.walks_per_node},
               {"seed", w.seed},
               {"on_the_fly", w.on_the_fly}};
}

ojson train_json(const TrainConfig& t) {
  return ojson{{"dim", t.dim},
               {"window", t.window},
               {"negatives", t.negatives},
               {"epochs", t.epochs},
               {"learning_rate", t.learning_rate},
               {"seed", t.seed}};
}

ojson cluster_json(const ClusterConfig& c) {
  ojson j;
  j["K"] = c.k ? ojson(*c.k) : ojson(nullptr);
  j["restarts"] = c.restarts;
  j["seed"] = c.seed;
  j["seeds"] = c.seeds;
  j["tol"] = c.kmeans.tol;
  j["max_iter"] = c.kmeans.max_iter;
  return j;
}

// ------------------------------------------------------------ stage plumbing

struct StageInputs {
  std::vector<std::pair<std::string, fs::path>> files;  // stable key -> path
};

class OutputLock {
 public:
  explicit OutputLock(const fs::path& dir) : path_(dir / ".gpl.lock") {
    fs::create_directories(dir);
    file_ = std::fopen(path_.c_str(), "wx");
    if (!file_) {
      throw Error(ErrorCode::ConfigError,
                  "output directory " + dir.string() + " is locked by another run (" +
                      path_.string() + ")");
    }
  }
  ~OutputLock() {
    std::fclose(file_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  fs::path path_;
  std::FILE* file_ = nullptr;
};

std::string read_text(const fs::path& p) {
  const auto bytes = detail::read_file(p);
  return {bytes.begin(), bytes.end()};
}

fs::path stage_dir(const PipelineConfig& cfg, Stage s) { return cfg.output / std::string(to_string(s)); }

void require(const fs::path& p, Stage producer) {
  if (!fs::exists(p)) {
    throw Error(ErrorCode::MissingArtifact,
                p.string() + " not found; run the '" + std::string(to_string(producer)) +
                    "' stage first");
  }
}

std::string task_key(const TaskManifest& /*man*/, const PipelineConfig& cfg, const fs::path& p) {
  return "task/" + p.lexically_relative(cfg.manifest.parent_path()).generic_string();
}

std::optional<SamplerConfig> resolved_sampler(const PipelineConfig& cfg, const TaskManifest& man) {
  return cfg.sampler ? cfg.sampler : man.sampler;
}

VideoFeatures load_video(const fs::path& path, const std::optional<SamplerConfig>& sampler) {
  auto vf = load_features(path);
  if (sampler) {
    const auto expected = compute_clip_spans(vf.m, *sampler);
    if (expected != vf.spans) {
      throw Error(ErrorCode::RangeError,
                  path.string() + ": clip spans do not match sampler (sigma=" +
                      std::to_string(sampler->sigma) + ", omega=" + std::to_string(sampler->omega) +
                      ", psi=" + std::to_string(sampler->psi) + ")");
    }
  }
  return vf;
}

struct KeptTable {
  // per manifest video, kept clip indices (ascending)
  std::vector<std::vector<std::uint32_t>> kept;
};

KeptTable read_kept(const fs::path& path, std::size_t videos) {
  const auto text = read_text(path);
  const auto rows = detail::lines(text);
  if (rows.empty() || rows[0] != "video,clip,kept,interaction_fraction") {
    throw Error(ErrorCode::FormatError, path.string() + ": bad header");
  }
  KeptTable t;
  t.kept.resize(videos);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = path.string() + ":" + std::to_string(r + 1);
    const auto f = detail::split(rows[r]);
    if (f.size() != 4) throw Error(ErrorCode::FormatError, where + ": expected 4 columns");
    const auto v = detail::parse_int<std::size_t>(f[0], where);
    if (v >= videos) throw Error(ErrorCode::RangeError, where + ": unknown video index");
    if (detail::parse_int<int>(f[2], where) == 1) {
      t.kept[v].push_back(detail::parse_int<std::uint32_t>(f[1], where));
    }
  }
  return t;
}

struct AssignmentRow {
  NodeId id;
  std::uint32_t cluster;
};

std::vector<AssignmentRow> read_assignments(const fs::path& path) {
  const auto text = read_text(path);
  const auto rows = detail::lines(text);
  if (rows.empty() || rows[0] != "video,clip,cluster") {
    throw Error(ErrorCode::FormatError, path.string() + ": bad header");
  }
  std::vector<AssignmentRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::string where = path.string() + ":" + std::to_string(r + 1);
    const auto f = detail::split(rows[r]);
    if (f.size() != 3) throw Error(ErrorCode::FormatError, where + ": expected 3 columns");
    out.push_back({{detail::parse_int<std::uint32_t>(f[0], where),
                    detail::parse_int<std::uint32_t>(f[1], where)},
                   detail::parse_int<std::uint32_t>(f[2], where)});
  }
  return out;
}

std::uint32_t resolved_k(const PipelineConfig& cfg, const TaskManifest& man) {
  return cfg.cluster.k.value_or(man.K);
}

// ------------------------------------------------------------------ stages

StageInputs inputs_for(Stage s, const PipelineConfig& cfg, const TaskManifest& man) {
  StageInputs in;
  const auto add_task = [&](const fs::path& p) { in.files.emplace_back(task_key(man, cfg, p), p); };
  const auto add_stage = [&](Stage producer, const char* name) {
    const auto p = stage_dir(cfg, producer) / name;
    require(p, producer);
    in.files.emplace_back(std::string(to_string(producer)) + "/" + name, p);
  };
  add_task(cfg.manifest);
  switch (s) {
    case Stage::Filter: {
      const bool enabled = cfg.background.enabled.value_or(man.egocentric);
      for (const auto& e : man.entries) {
        add_task(e.features);
        if (enabled) {
          if (!e.mask) {
            throw Error(ErrorCode::MissingArtifact,
                        "background filtering is enabled but " + e.features.string() +
                            " has no mask");
          }
          add_task(*e.mask);
        }
      }
      break;
    }
    case Stage::Graph:
      for (const auto& e : man.entries) add_task(e.features);
      add_stage(Stage::Filter, "kept_clips.csv");
      break;
    case Stage::Embed:
      add_stage(Stage::Graph, "videos.csv");
      add_stage(Stage::Graph, "nodes.csv");
      add_stage(Stage::Graph, "edges.csv");
      break;
    case Stage::Cluster:
      add_stage(Stage::Embed, "embeddings.uge");
      break;
    case Stage::Order:
      add_stage(Stage::Graph, "videos.csv");
      add_stage(Stage::Graph, "nodes.csv");
      add_stage(Stage::Graph, "edges.csv");
      add_stage(Stage::Cluster, "assignments.csv");
      break;
    case Stage::Eval: {
      std::vector<std::string> missing;
      for (const auto& e : man.entries) {
        if (!e.annotations) missing.push_back(e.features.filename().string());
      }
      if (!missing.empty()) {
        std::string names;
        for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
        throw Error(ErrorCode::MissingArtifact, "eval needs annotations; missing for: " + names);
      }
      for (const auto& e : man.entries) {
        add_task(e.features);
        add_task(*e.annotations);
      }
      add_stage(Stage::Graph, "videos.csv");
      add_stage(Stage::Cluster, "assignments.csv");
      break;
    }
    case Stage::All:
      break;
  }
  return in;
}

void run_filter(const PipelineConfig& cfg, const TaskManifest& man, const fs::path& dir) {
  const bool enabled = cfg.background.enabled.value_or(man.egocentric);
  const auto sampler = resolved_sampler(cfg, man);
  std::string kept = "video,clip,kept,interaction_fraction\n";
  ojson summary;
  summary["enabled"] = enabled;
  summary["tau"] = cfg.background.tau;
  summary["videos"] = ojson::array();
  std::size_t survivors = 0;
  std::uint64_t total_clips = 0, removed_clips = 0;

  for (std::size_t v = 0; v < man.entries.size(); ++v) {
    const auto& e = man.entries[v];
    const auto vf = load_video(e.features, sampler);
    std::vector<bool> keep(vf.z(), true);
    std::vector<std::optional<double>> fraction(vf.z());
    bool dropped = false;
    if (enabled) {
      const auto mask = load_mask(*e.mask, vf.m);
      for (std::size_t i = 0; i < vf.z(); ++i) fraction[i] = interaction_fraction(vf.spans[i], mask);
      try {
        const auto r = filter_background(vf, mask, cfg.background.tau);
        for (std::size_t i = 0; i < vf.z(); ++i) {
          keep[i] = std::binary_search(r.kept_clips.begin(), r.kept_clips.end(), vf.spans[i].clip_index);
        }
      } catch (const Error& ex) {
        if (ex.code() != ErrorCode::AllClipsRemoved) throw;
        spdlog::warn("{}; video excluded from the graph", ex.what());
        keep.assign(vf.z(), false);
        dropped = true;
      }
    }
    std::size_t kept_count = 0;
    for (std::size_t i = 0; i < vf.z(); ++i) {
      kept += std::to_string(v) + ',' + std::to_string(vf.spans[i].clip_index) + ',' +
              (keep[i] ? "1" : "0") + ',' + (fraction[i] ? format_double(*fraction[i]) : "") + '\n';
      kept_count += keep[i];
    }
    survivors += kept_count > 0;
    total_clips += vf.z();
    removed_clips += vf.z() - kept_count;
    summary["videos"].push_back(ojson{{"video_id", vf.video_id},
                                      {"clips", vf.z()},
                                      {"kept", kept_count},
                                      {"removed_fraction",
                                       static_cast<double>(vf.z() - kept_count) / vf.z()},
                                      {"dropped", dropped}});
  }
  if (survivors == 0) {
    throw Error(ErrorCode::AllClipsRemoved, "background filtering removed every clip of every video");
  }
  summary["removed_fraction"] = static_cast<double>(removed_clips) / static_cast<double>(total_clips);
  detail::write_text(dir / "kept_clips.csv", kept);
  detail::write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void run_graph(const PipelineConfig& cfg, const TaskManifest& man, const fs::path& dir,
               unsigned threads) {
  const auto sampler = resolved_sampler(cfg, man);
  const auto kept = read_kept(stage_dir(cfg, Stage::Filter) / "kept_clips.csv", man.entries.size());
  std::vector<VideoFeatures> videos;
  for (std::size_t v = 0; v < man.entries.size(); ++v) {
    if (kept.kept[v].empty()) continue;
    videos.push_back(select_clips(load_video(man.entries[v].features, sampler), kept.kept[v]));
  }
  if (videos.size() == 1) spdlog::warn("single video: the graph has temporal edges only");
  const auto g = build_unity_graph(videos, {cfg.spatial_weight, threads});
  spdlog::info("graph: {} nodes, {} spatial + {} temporal edges, {} similarity evaluations",
               g.node_count(), g.count(EdgeKind::Spatial), g.count(EdgeKind::Temporal),
               g.build_stats.similarity_evaluations);
  write_graph(g, dir);
}

void run_embed(const PipelineConfig& cfg, const fs::path& dir, unsigned threads, bool deterministic) {
  const auto g = read_graph(stage_dir(cfg, Stage::Graph));
  const TransitionTables tables(g, cfg.walk.p, cfg.walk.q, cfg.walk.on_the_fly);
  if (!tables.isolated_nodes().empty()) {
    spdlog::warn("{} isolated nodes; their walks have length 1", tables.isolated_nodes().size());
  }
  const auto corpus = generate_walks(tables, cfg.walk, threads);
  spdlog::info("embed: {} walks, {} tokens", corpus.walks.size(), corpus.token_count());
  NodeEmbeddings emb;
  emb.ids = g.nodes();
  emb.vectors = train_skipgram(corpus, cfg.train, g.node_count(), {deterministic, threads});
  write_embeddings(emb, dir / "embeddings.uge");
  detail::write_text(dir / "walks.txt", format_walks(corpus, g));
  ojson summary{{"nodes", g.node_count()},
                {"walks", corpus.walks.size()},
                {"tokens", corpus.token_count()},
                {"isolated_nodes", tables.isolated_nodes().size()},
                {"dim", cfg.train.dim},
                {"deterministic", deterministic}};
  detail::write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void run_cluster(const PipelineConfig& cfg, const TaskManifest& man, const fs::path& dir) {
  const auto emb = load_embeddings(stage_dir(cfg, Stage::Embed) / "embeddings.uge");
  const auto k = resolved_k(cfg, man);
  const auto seeds = cfg.cluster.seeds.empty() ? restart_seeds(cfg.cluster.seed, cfg.cluster.restarts)
                                               : cfg.cluster.seeds;
  const auto result = best_of_restarts(emb.vectors, k, seeds, cfg.cluster.kmeans);
  spdlog::info("cluster: K={} inertia={} (seed {}, {} iterations)", k, result.inertia, result.seed,
               result.iterations);

  std::string csv = "video,clip,cluster\n";
  for (std::size_t i = 0; i < emb.ids.size(); ++i) {
    csv += std::to_string(emb.ids[i].video) + ',' + std::to_string(emb.ids[i].clip) + ',' +
           std::to_string(result.assignments[i]) + '\n';
  }
  detail::write_text(dir / "assignments.csv", csv);
  write_centroids(result.centroids, dir / "centroids.ugc");
  const auto proj = pca2(emb.vectors);
  detail::write_text(dir / "projection.csv", format_projection_csv(emb, result.assignments, proj));
  ojson summary{{"K", k},
                {"inertia", result.inertia},
                {"iterations", result.iterations},
                {"best_seed", result.seed},
                {"restarts", seeds.size()}};
  detail::write_text(dir / "summary.json", summary.dump(2) + "\n");
}

void run_order(const PipelineConfig& cfg, const TaskManifest& man, const fs::path& dir) {
  const auto g = read_graph(stage_dir(cfg, Stage::Graph));
  const auto rows = read_assignments(stage_dir(cfg, Stage::Cluster) / "assignments.csv");
  if (rows.size() != g.node_count()) {
    throw Error(ErrorCode::LengthMismatch, "order: assignments and graph nodes differ in count");
  }
  std::vector<std::uint32_t> assignments(rows.size()), video_of(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].id != g.nodes()[i]) {
      throw Error(ErrorCode::FormatError, "order: assignment rows do not follow graph node order");
    }
    assignments[i] = rows[i].cluster;
    video_of[i] = rows[i].id.video;
  }
  const auto result = order_keysteps(assignments, g.times(), video_of, g.video_ids(),
                                     resolved_k(cfg, man), cfg.ordering);
  detail::write_text(dir / "order.txt", format_order_report(man.task_name, result));
}

void run_eval(const PipelineConfig& cfg, const TaskManifest& man, const fs::path& dir) {
  const auto sampler = resolved_sampler(cfg, man);
  std::vector<std::string> graph_videos;
  {
    const auto text = read_text(stage_dir(cfg, Stage::Graph) / "videos.csv");
    const auto rows = detail::lines(text);
    for (std::size_t r = 1; r < rows.size(); ++r) graph_videos.emplace_back(detail::split(rows[r])[1]);
  }
  const auto rows = read_assignments(stage_dir(cfg, Stage::Cluster) / "assignments.csv");
  std::map<std::string, std::map<std::uint32_t, std::uint32_t>> by_video;
  for (const auto& r : rows) {
    if (r.id.video >= graph_videos.size()) {
      throw Error(ErrorCode::RangeError, "eval: assignment refers to unknown video");
    }
    by_video[graph_videos[r.id.video]][r.id.clip] = r.cluster;
  }

  const auto k = resolved_k(cfg, man);
  std::vector<std::vector<std::int32_t>> predicted, truth;
  std::uint32_t k_gt = 0;
  for (const auto& e : man.entries) {
    const auto vf = load_video(e.features, sampler);
    const auto gt = load_annotations(*e.annotations, vf.m);
    k_gt = std::max(k_gt, gt.max_keystep_id());
    std::vector<std::int32_t> clip_labels(vf.z(), kUnlabeled);
    if (const auto it = by_video.find(vf.video_id); it != by_video.end()) {
      for (std::size_t i = 0; i < vf.z(); ++i) {
        if (const auto c = it->second.find(vf.spans[i].clip_index); c != it->second.end()) {
          clip_labels[i] = static_cast<std::int32_t>(c->second);
        }
      }
    }
    predicted.push_back(expand_to_frames(clip_labels, vf.spans, vf.m));
    truth.push_back(gt.frame_labels(vf.m));
  }
  const auto report = evaluate_task(predicted, truth, k, k_gt);
  spdlog::info("eval: F1={:.4f} IoU={:.4f} precision={:.4f} recall={:.4f}", report.f1, report.iou,
               report.precision, report.recall);
  detail::write_text(dir / "report.txt", format_eval_text(man.task_name, report));
  detail::write_text(dir / "report.csv", format_eval_csv(man.task_name, report));
  detail::write_text(dir / "per_keystep.csv", format_keystep_csv(man.task_name, report));
  // full-precision copy of the headline numbers
  const ojson summary{{"task", man.task_name},
                      {"K", k},
                      {"K_gt", k_gt},
                      {"precision", report.precision},
                      {"recall", report.recall},
                      {"f1", report.f1},
                      {"iou", report.iou},
                      {"matched_pairs", report.matched_pairs}};
  detail::write_text(dir / "summary.json", summary.dump(2) + "\n");
}

ojson hash_inputs(const StageInputs& in) {
  ojson j = ojson::object();
  for (const auto& [key, path] : in.files) j[key] = sha256_file(path);
  return j;
}

ojson hash_outputs(const fs::path& dir) {
  ojson j = ojson::object();
  for (const auto& [name, hash] : tree_hashes(dir, {"stage.json", "timing.json"})) j[name] = hash;
  return j;
}

bool up_to_date(const fs::path& dir, const std::string& config_hash, const ojson& inputs) {
  const auto meta_path = dir / "stage.json";
  if (!fs::exists(meta_path)) return false;
  try {
    const auto meta = ojson::parse(read_text(meta_path));
    return meta.at("config_hash") == config_hash && meta.at("inputs") == inputs &&
           meta.at("outputs") == hash_outputs(dir);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Filter: return "filter";
    case Stage::Graph: return "graph";
    case Stage::Embed: return "embed";
    case Stage::Cluster: return "cluster";
    case Stage::Order: return "order";
    case Stage::Eval: return "eval";
    case Stage::All: return "all";
  }
  return "all";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (const auto s : {Stage::Filter, Stage::Graph, Stage::Embed, Stage::Cluster, Stage::Order,
                       Stage::Eval, Stage::All}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

void PipelineConfig::validate() const {
  if (manifest.empty()) throw Error(ErrorCode::ConfigError, "config: manifest path is required");
  if (!fs::exists(manifest)) {
    throw Error(ErrorCode::ConfigError, "config: manifest " + manifest.string() + " does not exist");
  }
  if (output.empty()) throw Error(ErrorCode::ConfigError, "config: output directory is required");
  if (sampler) sampler->validate();
  if (!(background.tau >= 0.0 && background.tau <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "config: background.tau must lie in [0,1]");
  }
  walk.validate();
  train.validate();
  if (cluster.k && *cluster.k < 1) throw Error(ErrorCode::ConfigError, "config: cluster.K must be >= 1");
  if (cluster.seeds.empty() && cluster.restarts < 1) {
    throw Error(ErrorCode::ConfigError, "config: cluster.restarts must be >= 1");
  }
  if (!(cluster.kmeans.tol > 0.0) || cluster.kmeans.max_iter < 1) {
    throw Error(ErrorCode::ConfigError, "config: cluster tol and max_iter must be positive");
  }
}

std::string PipelineConfig::hash(Stage stage) const {
  ojson j;
  const auto want = [&](Stage s) { return stage == Stage::All || stage == s; };
  if (want(Stage::Filter) || want(Stage::Graph)) j["sampler"] = sampler_json(sampler);
  if (want(Stage::Filter)) j["background"] = background_json(background);
  if (want(Stage::Graph)) j["spatial_weight"] = to_string(spatial_weight);
  if (want(Stage::Embed)) {
    j["walk"] = walk_json(walk);
    j["train"] = train_json(train);
    j["deterministic"] = deterministic;
  }
  if (want(Stage::Cluster)) j["cluster"] = cluster_json(cluster);
  if (want(Stage::Order)) j["ordering"] = to_string(ordering);
  if (want(Stage::Order) || want(Stage::Eval)) j["K"] = cluster.k ? ojson(*cluster.k) : ojson(nullptr);
  j["stage"] = to_string(stage);
  return sha256_hex(j.dump());
}

PipelineConfig parse_pipeline_config(const std::string& json_text, const fs::path& base_dir) {
  PipelineConfig cfg;
  const auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return (path.is_absolute() ? path : base_dir / path).lexically_normal();
  };
  try {
    const auto j = nlohmann::json::parse(json_text);
    reject_unknown(j,
                   {"manifest", "output", "sampler", "background", "graph", "walk", "train",
                    "cluster", "ordering", "deterministic", "threads"},
                   "config");
    cfg.manifest = resolve(j.at("manifest").get<std::string>());
    cfg.output = resolve(j.value("output", std::string("out")));
    if (j.contains("sampler") && !j["sampler"].is_null()) {
      const auto& s = j["sampler"];
      reject_unknown(s, {"sigma", "omega", "psi"}, "config.sampler");
      cfg.sampler = SamplerConfig{s.at("sigma").get<std::uint32_t>(), s.at("omega").get<std::uint32_t>(),
                                  s.at("psi").get<std::uint32_t>()};
    }
    if (j.contains("background")) {
      const auto& b = j["background"];
      reject_unknown(b, {"enabled", "tau"}, "config.background");
      if (b.contains("enabled") && !b["enabled"].is_null()) cfg.background.enabled = b["enabled"].get<bool>();
      cfg.background.tau = b.value("tau", cfg.background.tau);
    }
    if (j.contains("graph")) {
      const auto& g = j["graph"];
      reject_unknown(g, {"spatial_weight"}, "config.graph");
      const auto w = g.value("spatial_weight", std::string("unit"));
      if (w == "unit") {
        cfg.spatial_weight = SpatialWeight::Unit;
      } else if (w == "cosine") {
        cfg.spatial_weight = SpatialWeight::Cosine;
      } else {
        throw Error(ErrorCode::ConfigError, "config.graph.spatial_weight must be unit or cosine");
      }
    }
    if (j.contains("walk")) {
      const auto& w = j["walk"];
      reject_unknown(w, {"p", "q", "length", "walks_per_node", "seed", "on_the_fly"}, "config.walk");
      cfg.walk.p = w.value("p", cfg.walk.p);
      cfg.walk.q = w.value("q", cfg.walk.q);
      cfg.walk.walk_length = w.value("length", cfg.walk.walk_length);
      cfg.walk.walks_per_node = w.value("walks_per_node", cfg.walk.walks_per_node);
      cfg.walk.seed = w.value("seed", cfg.walk.seed);
      cfg.walk.on_the_fly = w.value("on_the_fly", cfg.walk.on_the_fly);
    }
    if (j.contains("train")) {
      const auto& t = j["train"];
      reject_unknown(t, {"dim", "window", "negatives", "epochs", "learning_rate", "seed"}, "config.train");
      cfg.train.dim = t.value("dim", cfg.train.dim);
      cfg.train.window = t.value("window", cfg.train.window);
      cfg.train.negatives = t.value("negatives", cfg.train.negatives);
      cfg.train.epochs = t.value("epochs", cfg.train.epochs);
      cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
      cfg.train.seed = t.value("seed", cfg.train.seed);
    }
    if (j.contains("cluster")) {
      const auto& c = j["cluster"];
      reject_unknown(c, {"K", "restarts", "seed", "seeds", "tol", "max_iter"}, "config.cluster");
      if (c.contains("K") && !c["K"].is_null()) cfg.cluster.k = c["K"].get<std::uint32_t>();
      cfg.cluster.restarts = c.value("restarts", cfg.cluster.restarts);
      cfg.cluster.seed = c.value("seed", cfg.cluster.seed);
      cfg.cluster.seeds = c.value("seeds", cfg.cluster.seeds);
      cfg.cluster.kmeans.tol = c.value("tol", cfg.cluster.kmeans.tol);
      cfg.cluster.kmeans.max_iter = c.value("max_iter", cfg.cluster.kmeans.max_iter);
    }
    if (j.contains("ordering")) {
      const auto& o = j["ordering"];
      reject_unknown(o, {"mode"}, "config.ordering");
      const auto mode = o.value("mode", std::string("both"));
      if (mode == "global") {
        cfg.ordering = OrderingMode::Global;
      } else if (mode == "per_video") {
        cfg.ordering = OrderingMode::PerVideo;
      } else if (mode == "both") {
        cfg.ordering = OrderingMode::Both;
      } else {
        throw Error(ErrorCode::ConfigError, "config.ordering.mode must be global, per_video or both");
      }
    }
    cfg.deterministic = j.value("deterministic", cfg.deterministic);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ConfigError, std::string("config: ") + ex.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::ConfigError, "config file " + path.string() + " not found");
  return parse_pipeline_config(read_text(path), path.parent_path());
}

std::string format_pipeline_config(const PipelineConfig& cfg, const fs::path& base_dir) {
  const auto rel = [&](const fs::path& p) {
    return base_dir.empty() ? p.generic_string() : p.lexically_relative(base_dir).generic_string();
  };
  ojson j;
  j["manifest"] = rel(cfg.manifest);
  j["output"] = rel(cfg.output);
  j["sampler"] = sampler_json(cfg.sampler);
  j["background"] = background_json(cfg.background);
  j["graph"] = ojson{{"spatial_weight", to_string(cfg.spatial_weight)}};
  j["walk"] = walk_json(cfg.walk);
  j["train"] = train_json(cfg.train);
  j["cluster"] = cluster_json(cfg.cluster);
  j["ordering"] = ojson{{"mode", to_string(cfg.ordering)}};
  j["deterministic"] = cfg.deterministic;
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

Pipeline::Pipeline(PipelineConfig cfg, RunOptions options)
    : cfg_(std::move(cfg)), options_(options) {
  if (options_.deterministic) cfg_.deterministic = *options_.deterministic;
  if (options_.threads) cfg_.threads = *options_.threads;
  cfg_.validate();
}

std::vector<StageResult> Pipeline::run(Stage stage) {
  OutputLock lock(cfg_.output);
  std::vector<StageResult> results;
  if (stage == Stage::All) {
    for (const auto s : kOrder) results.push_back(run_one(s));
  } else {
    results.push_back(run_one(stage));
  }
  return results;
}

StageResult Pipeline::run_one(Stage stage) {
  const auto start = std::chrono::steady_clock::now();
  const auto man = load_manifest(cfg_.manifest);
  if (const auto warning = man.validate()) spdlog::warn("{}", *warning);
  const auto dir = stage_dir(cfg_, stage);
  const auto config_hash = cfg_.hash(stage);
  const auto inputs = hash_inputs(inputs_for(stage, cfg_, man));

  StageResult result{stage};
  if (!options_.force && up_to_date(dir, config_hash, inputs)) {
    spdlog::info("{}: up to date, skipping", to_string(stage));
    result.skipped = true;
    return result;
  }

  fs::remove_all(dir);
  fs::create_directories(dir);
  const unsigned threads = std::max(1u, cfg_.threads);
  try {
    switch (stage) {
      case Stage::Filter: run_filter(cfg_, man, dir); break;
      case Stage::Graph: run_graph(cfg_, man, dir, threads); break;
      case Stage::Embed: run_embed(cfg_, dir, threads, cfg_.deterministic); break;
      case Stage::Cluster: run_cluster(cfg_, man, dir); break;
      case Stage::Order: run_order(cfg_, man, dir); break;
      case Stage::Eval: run_eval(cfg_, man, dir); break;
      case Stage::All: break;
    }
  } catch (const Error& ex) {
    throw Error(ex.code(), std::string("stage '") + std::string(to_string(stage)) + "': " + ex.message());
  }

  ojson meta;
  meta["stage"] = to_string(stage);
  meta["config_hash"] = config_hash;
  meta["inputs"] = inputs;
  meta["outputs"] = hash_outputs(dir);
  detail::write_text(dir / "stage.json", meta.dump(2) + "\n");

  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail::write_text(dir / "timing.json",
                     ojson{{"stage", to_string(stage)}, {"wall_seconds", result.wall_seconds}}.dump(2) + "\n");
  spdlog::info("{}: done in {:.2f}s", to_string(stage), result.wall_seconds);
  return result;
}

EvalSummary load_eval_summary(const fs::path& output) {
  const auto path = output / "eval" / "summary.json";
  require(path, Stage::Eval);
  try {
    const auto j = nlohmann::json::parse(read_text(path));
    EvalSummary s;
    s.precision = j.at("precision").get<double>();
    s.recall = j.at("recall").get<double>();
    s.f1 = j.at("f1").get<double>();
    s.iou = j.at("iou").get<double>();
    s.matched_pairs = j.at("matched_pairs").get<std::uint32_t>();
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::FormatError, path.string() + ": " + ex.what());
  }
}

const std::vector<std::string>& nondeterministic_artifacts() {
  static const std::vector<std::string> names{"timing.json"};
  return names;
}

}  // namespace gpl
