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


#include "gpl/synth.hpp"

#include <cmath>

#include <json.hpp>

#include "binary_io.hpp"
#include "gpl/error.hpp"
#include "gpl/manifest.hpp"
#include "gpl/rng.hpp"

namespace gpl {

namespace {

std::vector<double> random_unit(Rng& rng, std::uint32_t dim) {
  std::vector<double> v(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      n2 += x * x;
    }
  } while (n2 == 0.0);
  const double n = std::sqrt(n2);
  for (auto& x : v) x /= n;
  return v;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

std::vector<std::vector<double>> place_centers(const SynthSpec& spec) {
  Rng rng(derive_seed(spec.seed, 0xce47e5ULL));
  std::vector<std::vector<double>> centers;
  std::uint64_t attempts = 0;
  while (centers.size() < spec.k_true) {
    if (++attempts > 100000) {
      throw Error(ErrorCode::InfeasibleSeparation,
                  "cannot place " + std::to_string(spec.k_true) + " unit centers in d=" +
                      std::to_string(spec.dim) + " with separation " +
                      std::to_string(spec.separation));
    }
    auto c = random_unit(rng, spec.dim);
    bool ok = true;
    for (const auto& other : centers) ok = ok && distance(c, other) >= spec.separation;
    if (ok) centers.push_back(std::move(c));
  }
  return centers;
}

void write_row(std::span<float> row, const std::vector<double>& v) {
  double n2 = 0.0;
  for (const double x : v) n2 += x * x;
  const double n = std::sqrt(n2);
  for (std::size_t j = 0; j < v.size(); ++j) row[j] = static_cast<float>(v[j] / n);
}

}  // namespace

void SynthSpec::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(ErrorCode::ConfigError, "synth: " + msg); };
  if (k_true < 1) fail("k_true must be >= 1");
  if (videos < 1) fail("videos must be >= 1");
  if (clips_per_step_min < 1 || clips_per_step_max < clips_per_step_min) {
    fail("clips per step range is invalid");
  }
  if (dim < 1) fail("dim must be >= 1");
  if (!(separation > 0.0)) fail("separation must be > 0");
  if (!(noise >= 0.0)) fail("noise must be >= 0");
  if (!(background_fraction >= 0.0 && background_fraction < 1.0)) {
    fail("background_fraction must lie in [0,1)");
  }
  if (!(jitter >= 0.0 && jitter <= 1.0)) fail("jitter must lie in [0,1]");
  if (frames_per_clip < 1) fail("frames_per_clip must be >= 1");
  if (!(fps > 0.0f)) fail("fps must be > 0");
}

SynthSpec synth_a_spec() {
  SynthSpec s;
  s.task_name = "synth-A";
  s.k_true = 4;
  s.videos = 6;
  s.dim = 32;
  s.separation = 1.0;
  s.noise = 0.1;
  s.background_fraction = 0.2;
  s.jitter = 0.1;
  s.seed = 42;
  return s;
}

SynthTask generate_task(const SynthSpec& spec) {
  spec.validate();
  SynthTask task;
  task.spec = spec;
  task.sampler = {1, spec.frames_per_clip, spec.frames_per_clip};
  task.centers = place_centers(spec);

  for (std::uint32_t v = 0; v < spec.videos; ++v) {
    Rng rng(derive_seed(spec.seed, 0x766964ULL, v));
    SynthVideoStats stats;
    stats.step_order.resize(spec.k_true);
    for (std::uint32_t s = 0; s < spec.k_true; ++s) stats.step_order[s] = s;
    for (std::uint32_t s = 0; s + 1 < spec.k_true; ++s) {
      if (rng.bernoulli(spec.jitter)) std::swap(stats.step_order[s], stats.step_order[s + 1]);
    }

    // -1 marks a background clip
    std::vector<std::int32_t> labels;
    for (const auto step : stats.step_order) {
      const auto count = spec.clips_per_step_min +
                         static_cast<std::uint32_t>(rng.index(
                             spec.clips_per_step_max - spec.clips_per_step_min + 1));
      labels.insert(labels.end(), count, static_cast<std::int32_t>(step));
    }
    stats.step_clips = static_cast<std::uint32_t>(labels.size());
    stats.background_clips = static_cast<std::uint32_t>(std::llround(
        spec.background_fraction * stats.step_clips / (1.0 - spec.background_fraction)));
    for (std::uint32_t b = 0; b < stats.background_clips; ++b) {
      const auto pos = rng.index(labels.size() + 1);
      labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(pos), -1);
    }

    const auto z = static_cast<std::uint32_t>(labels.size());
    VideoFeatures vf;
    char id[32];
    std::snprintf(id, sizeof(id), "video_%02u", v);
    vf.video_id = id;
    vf.m = z * spec.frames_per_clip;
    vf.fps = spec.fps;
    vf.spans = compute_clip_spans(vf.m, task.sampler);
    vf.embeddings = Matrix(z, spec.dim);

    InteractionMask mask;
    mask.video_id = vf.video_id;
    mask.flags.assign(vf.m, true);
    GroundTruth gt;
    gt.video_id = vf.video_id;

    for (std::uint32_t c = 0; c < z; ++c) {
      std::vector<double> e(spec.dim);
      if (labels[c] < 0) {
        e = random_unit(rng, spec.dim);
        for (std::uint32_t f = c * spec.frames_per_clip; f < (c + 1) * spec.frames_per_clip; ++f) {
          mask.flags[f] = false;
        }
      } else {
        const auto& center = task.centers[labels[c]];
        for (std::uint32_t j = 0; j < spec.dim; ++j) {
          e[j] = center[j] + (spec.noise > 0.0 ? spec.noise * rng.normal() : 0.0);
        }
      }
      write_row(vf.embeddings.row(c), e);
    }

    for (std::uint32_t c = 0; c < z;) {
      if (labels[c] < 0) {
        ++c;
        continue;
      }
      std::uint32_t end = c;
      while (end < z && labels[end] == labels[c]) ++end;
      const auto keystep = static_cast<std::uint32_t>(labels[c]) + 1;
      gt.segments.push_back({c * spec.frames_per_clip, end * spec.frames_per_clip, keystep,
                             "step_" + std::to_string(keystep)});
      c = end;
    }

    task.videos.push_back(std::move(vf));
    task.annotations.push_back(std::move(gt));
    task.masks.push_back(std::move(mask));
    task.stats.push_back(std::move(stats));
  }
  return task;
}

void write_task(const SynthTask& task, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  TaskManifest manifest;
  manifest.task_name = task.spec.task_name;
  manifest.K = task.spec.k_true;
  manifest.sampler = task.sampler;
  manifest.egocentric = task.spec.background_fraction > 0.0;

  nlohmann::ordered_json stats;
  stats["spec"] = nlohmann::ordered_json::parse(format_synth_spec(task.spec));
  stats["videos"] = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < task.videos.size(); ++v) {
    const auto& vf = task.videos[v];
    const auto features = std::filesystem::path("features") / (vf.video_id + ".ugf");
    const auto mask = std::filesystem::path("masks") / (vf.video_id + ".ugm");
    const auto annotations = std::filesystem::path("annotations") / (vf.video_id + ".csv");
    write_features(vf, dir / features);
    write_mask(task.masks[v], dir / mask);
    write_annotations(task.annotations[v], dir / annotations);
    manifest.entries.push_back({features, annotations, mask});

    nlohmann::ordered_json s;
    s["video_id"] = vf.video_id;
    s["frames"] = vf.m;
    s["clips"] = vf.z();
    s["step_clips"] = task.stats[v].step_clips;
    s["background_clips"] = task.stats[v].background_clips;
    s["step_order"] = task.stats[v].step_order;
    s["segments"] = task.annotations[v].segments.size();
    stats["videos"].push_back(std::move(s));
  }
  detail::write_text(dir / "manifest.json", format_manifest(manifest, {}));
  detail::write_text(dir / "synth_stats.json", stats.dump(2) + "\n");
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  SynthSpec s;
  try {
    const auto j = nlohmann::json::parse(json_text);
    s.task_name = j.value("task_name", s.task_name);
    s.k_true = j.value("k_true", s.k_true);
    s.videos = j.value("videos", s.videos);
    s.clips_per_step_min = j.value("clips_per_step_min", s.clips_per_step_min);
    s.clips_per_step_max = j.value("clips_per_step_max", s.clips_per_step_max);
    s.dim = j.value("dim", s.dim);
    s.separation = j.value("separation", s.separation);
    s.noise = j.value("noise", s.noise);
    s.background_fraction = j.value("background_fraction", s.background_fraction);
    s.jitter = j.value("jitter", s.jitter);
    s.seed = j.value("seed", s.seed);
    s.frames_per_clip = j.value("frames_per_clip", s.frames_per_clip);
    s.fps = j.value("fps", s.fps);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ConfigError, std::string("synth spec: ") + ex.what());
  }
  s.validate();
  return s;
}

std::string format_synth_spec(const SynthSpec& s) {
  nlohmann::ordered_json j;
  j["task_name"] = s.task_name;
  j["k_true"] = s.k_true;
  j["videos"] = s.videos;
  j["clips_per_step_min"] = s.clips_per_step_min;
  j["clips_per_step_max"] = s.clips_per_step_max;
  j["dim"] = s.dim;
  j["separation"] = s.separation;
  j["noise"] = s.noise;
  j["background_fraction"] = s.background_fraction;
  j["jitter"] = s.jitter;
  j["seed"] = s.seed;
  j["frames_per_clip"] = s.frames_per_clip;
  j["fps"] = s.fps;
  return j.dump(2) + "\n";
}

}  // namespace gpl
