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


// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Reference values come from the oracles in this directory
// or from closed forms written out here.

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "gpl/error.hpp"
#include "gpl/hungarian.hpp"
#include "gpl/kmeans.hpp"
#include "gpl/node2vec.hpp"
#include "gpl/pipeline.hpp"
#include "gpl/skipgram.hpp"
#include "gpl/synth.hpp"
#include "gpl/unity_graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gpl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

long double cosine_oracle(std::span<const float> u, std::span<const float> v) {
  long double uv = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<long double>(u[i]) * v[i];
    uu += static_cast<long double>(u[i]) * u[i];
    vv += static_cast<long double>(v[i]) * v[i];
  }
  return uv / sqrtl(uu * vv);
}

// ---------------------------------------------------------------------------

Outcome cosine_criterion() {
  Rng rng(2024);
  double worst = 0;
  bool exact = true;
  for (std::size_t d : {2u, 64u, 512u}) {
    for (int t = 0; t < 10000; ++t) {
      const auto m = test::random_matrix(rng, 2, d);
      const double got = cosine_similarity(m.row(0), m.row(1));
      worst = std::max(worst, static_cast<double>(fabsl(got - cosine_oracle(m.row(0), m.row(1)))));
      // identical and scaled-identical vectors
      exact &= cosine_similarity(m.row(0), m.row(0)) == 1.0;
      // orthogonal: disjoint supports
      Matrix o(2, d, 0.0f);
      for (std::size_t j = 0; j < d; ++j) (j % 2 == 0 ? o(0, j) : o(1, j)) = m(0, j) == 0.0f ? 1.0f : m(0, j);
      exact &= cosine_similarity(o.row(0), o.row(1)) == 0.0;
    }
  }
  const std::vector<float> a{1, 1}, b{1, -1};
  exact &= cosine_similarity(a, b) == 0.0;
  return {worst <= 1e-6 && exact, fmt("30000 pairs, max |err| %.3g, identical=1 and orthogonal=0 %s", worst,
                                      exact ? "exact" : "NOT exact")};
}

// ---------------------------------------------------------------------------

using EdgeSet = std::set<std::pair<NodeId, NodeId>>;

EdgeSet edge_set(const UnityGraph& g, EdgeKind kind) {
  EdgeSet s;
  for (const auto& e : g.edges()) {
    if (e.kind == kind) s.emplace(g.nodes()[e.a], g.nodes()[e.b]);
  }
  return s;
}

// Directed picks by exhaustive search in long double; nullopt when the best
// and second-best similarities are too close to call (instance not tie-free).
std::optional<std::vector<std::pair<NodeId, NodeId>>> oracle_picks(const std::vector<VideoFeatures>& vids) {
  std::vector<std::pair<NodeId, NodeId>> picks;
  for (std::uint32_t i = 0; i < vids.size(); ++i) {
    for (std::uint32_t j = 0; j < vids.size(); ++j) {
      if (i == j) continue;
      for (std::uint32_t c = 0; c < vids[i].z(); ++c) {
        long double best = -2, second = -2;
        std::uint32_t arg = 0;
        for (std::uint32_t e = 0; e < vids[j].z(); ++e) {
          const auto s = cosine_oracle(vids[i].embeddings.row(c), vids[j].embeddings.row(e));
          if (s > best) {
            second = best;
            best = s;
            arg = e;
          } else if (s > second) {
            second = s;
          }
        }
        if (vids[j].z() > 1 && best - second < 1e-6) return std::nullopt;
        picks.push_back({{i, c}, {j, arg}});
      }
    }
  }
  return picks;
}

Outcome topology_criterion() {
  Rng rng(7);
  int instances = 0, failures = 0, regenerated = 0;
  while (instances < 200) {
    const auto n = 1 + rng.index(5);
    const auto d = 2 + rng.index(15);
    std::vector<VideoFeatures> vids;
    for (std::size_t v = 0; v < n; ++v) {
      vids.push_back(test::random_video(rng, "v" + std::to_string(v), 1 + rng.index(20), d));
    }
    const auto picks = oracle_picks(vids);
    if (!picks) {
      ++regenerated;
      continue;
    }
    ++instances;
    std::uint64_t expected_picks = 0, expected_temporal = 0;
    for (std::size_t i = 0; i < n; ++i) {
      expected_temporal += vids[i].z() - 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) expected_picks += vids[i].z();
      }
    }
    EdgeSet expected_spatial;
    for (const auto& [a, b] : *picks) expected_spatial.insert(a < b ? std::pair{a, b} : std::pair{b, a});

    const auto g = build_unity_graph(vids);
    bool ok = picks->size() == expected_picks && g.build_stats.directed_picks == expected_picks &&
              g.count(EdgeKind::Temporal) == expected_temporal &&
              edge_set(g, EdgeKind::Spatial) == expected_spatial;

    auto scaled = vids;
    for (auto& vf : scaled) {
      for (std::size_t r = 0; r < vf.z(); ++r) {
        const auto c = static_cast<float>(std::exp(rng.uniform(-3.0, 3.0)));
        for (auto& x : vf.embeddings.row(r)) x *= c;
      }
    }
    const auto gs = build_unity_graph(scaled);
    ok &= edge_set(gs, EdgeKind::Spatial) == edge_set(g, EdgeKind::Spatial) &&
          edge_set(gs, EdgeKind::Temporal) == edge_set(g, EdgeKind::Temporal);
    failures += !ok;
  }
  return {failures == 0, fmt("%d instances (%d near-tie instances redrawn), %d mismatches", instances, regenerated,
                             failures)};
}

// ---------------------------------------------------------------------------

UnityGraph graph_from_pairs(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                            const std::vector<double>& weights = {}) {
  std::vector<std::string> ids;
  std::vector<NodeId> nodes;
  std::vector<double> times;
  for (std::uint32_t i = 0; i < n; ++i) {
    ids.push_back("v" + std::to_string(i));
    nodes.push_back({i, 0});
    times.push_back(0.5);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    edges.push_back({pairs[i].first, pairs[i].second, EdgeKind::Spatial, weights.empty() ? 1.0 : weights[i]});
  }
  return UnityGraph(ids, nodes, times, edges);
}

double prob_to(const UnityGraph& g, const std::vector<double>& pr, std::uint32_t cur, std::uint32_t x) {
  const auto nb = g.neighbors(cur);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (nb[i] == x) return pr[i];
  }
  return 0.0;
}

Outcome transitions_criterion() {
  double worst_sum = 0;
  std::size_t distributions = 0;
  auto check_sums = [&](const UnityGraph& g, double p, double q) {
    for (std::uint32_t cur = 0; cur < g.node_count(); ++cur) {
      if (g.degree(cur) == 0) continue;
      std::vector<std::optional<std::uint32_t>> prevs{std::nullopt};
      for (auto x : g.neighbors(cur)) prevs.emplace_back(x);
      for (const auto& prev : prevs) {
        const auto pr = transition_probabilities(g, p, q, prev, cur);
        double s = 0;
        for (double v : pr) {
          if (v < 0) worst_sum = 1;
          s += v;
        }
        worst_sum = std::max(worst_sum, std::abs(s - 1.0));
        ++distributions;
      }
    }
  };

  Rng rng(99);
  for (int t = 0; t < 100; ++t) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.index(15));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<double> w;
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) {
        if (rng.bernoulli(0.35)) {
          pairs.emplace_back(a, b);
          w.push_back(rng.uniform(1e-3, 5.0));
        }
      }
    }
    check_sums(graph_from_pairs(n, pairs, w), rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0));
  }
  {
    auto spec = synth_a_spec();
    const auto task = generate_task(spec);
    check_sums(build_unity_graph(task.videos, {SpatialWeight::Cosine, 1}), 1.0, 0.5);
  }

  // closed forms
  double worst_closed = 0;
  const auto path = graph_from_pairs(3, {{0, 1}, {1, 2}});
  auto pr = transition_probabilities(path, 1, 1, 0u, 1);
  worst_closed = std::max({worst_closed, std::abs(prob_to(path, pr, 1, 0) - 0.5), std::abs(prob_to(path, pr, 1, 2) - 0.5)});
  pr = transition_probabilities(path, 2, 0.5, 0u, 1);
  worst_closed = std::max({worst_closed, std::abs(prob_to(path, pr, 1, 0) - 0.2), std::abs(prob_to(path, pr, 1, 2) - 0.8)});
  const auto tri = graph_from_pairs(3, {{0, 1}, {1, 2}, {0, 2}});
  for (double p : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (double q : {0.25, 1.0, 4.0}) {
      pr = transition_probabilities(tri, p, q, 0u, 1);
      worst_closed = std::max({worst_closed, std::abs(prob_to(tri, pr, 1, 0) - (1 / p) / (1 / p + 1)),
                               std::abs(prob_to(tri, pr, 1, 2) - 1 / (1 / p + 1))});
    }
  }

  // star K_{1,3}: center 0, arrived from leaf 1
  double worst_star = 0;
  const auto star = graph_from_pairs(4, {{0, 1}, {0, 2}, {0, 3}});
  struct Case {
    double p, q;
    double expect[4];
  };
  const Case cases[] = {{1, 1, {0, 1.0 / 3, 1.0 / 3, 1.0 / 3}}, {2, 0.5, {0, 0.5 / 4.5, 2 / 4.5, 2 / 4.5}}};
  for (const auto& c : cases) {
    for (bool otf : {false, true}) {
      const TransitionTables tables(star, c.p, c.q, otf);
      Rng draw(5);
      std::vector<int> hits(4, 0);
      const int steps = 100000;
      for (int i = 0; i < steps; ++i) ++hits[tables.next_step(1, 0, draw)];
      for (int leaf = 1; leaf <= 3; ++leaf) {
        worst_star = std::max(worst_star, std::abs(hits[leaf] / double(steps) - c.expect[leaf]));
      }
    }
  }
  const bool ok = worst_sum <= 1e-9 && worst_closed <= 1e-12 && worst_star <= 0.01;
  return {ok, fmt("%zu distributions max |sum-1| %.2g; closed forms max err %.2g; star max freq err %.4f", distributions,
                  worst_sum, worst_closed, worst_star)};
}

// ---------------------------------------------------------------------------

Outcome sgns_gradient_criterion() {
  Rng rng(31337);
  const std::size_t d = 16, k = 5;
  double worst = 0;
  for (int point = 0; point < 10; ++point) {
    std::vector<double> center(d), flat((k + 1) * d);
    for (auto& v : center) v = rng.normal() * 0.5;
    for (auto& v : flat) v = rng.normal() * 0.5;
    std::vector<std::span<const double>> targets;
    for (std::size_t t = 0; t <= k; ++t) targets.emplace_back(&flat[t * d], d);
    std::vector<double> gc(d), gt(flat.size());
    sgns_loss_gradient(center, targets, gc, gt);

    const double h = 1e-5;
    std::vector<double> analytic, numeric;
    for (std::size_t j = 0; j < d; ++j) {
      auto up = center, down = center;
      up[j] += h;
      down[j] -= h;
      analytic.push_back(gc[j]);
      numeric.push_back((sgns_loss(up, targets) - sgns_loss(down, targets)) / (2 * h));
    }
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double keep = flat[i];
      flat[i] = keep + h;
      const double up = sgns_loss(center, targets);
      flat[i] = keep - h;
      const double down = sgns_loss(center, targets);
      flat[i] = keep;
      analytic.push_back(gt[i]);
      numeric.push_back((up - down) / (2 * h));
    }
    double diff = 0, norm = 0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      norm += numeric[i] * numeric[i];
    }
    worst = std::max(worst, std::sqrt(diff) / std::max(std::sqrt(norm), 1e-300));
  }
  return {worst <= 1e-4, fmt("10 points, worst relative error %.3g", worst)};
}

// ---------------------------------------------------------------------------

Outcome kmeans_criterion() {
  Rng rng(4242);
  std::vector<std::uint64_t> seeds(50);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  int instances = 0, suboptimal = 0, increases = 0, runs = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::uint32_t k = 1; k <= std::min<std::size_t>(3, n); ++k) {
      for (int variant = 0; variant < 12; ++variant) {
        const std::size_t d = 1 + rng.index(3);
        Matrix x(n, d);
        for (std::size_t i = 0; i < n; ++i) {
          const double blob = static_cast<double>(rng.index(k)) * (variant % 3 == 0 ? 10.0 : 1.0);
          for (std::size_t j = 0; j < d; ++j) {
            // every fourth variant sits on a coarse grid so duplicates and ties occur
            x(i, j) = variant % 4 == 1 ? static_cast<float>(rng.index(3))
                                       : static_cast<float>(blob + rng.normal());
          }
        }
        ++instances;
        const auto best = best_of_restarts(x, k, seeds);
        const auto opt = oracle::brute_force_kmeans(x, k);
        if (best.inertia > opt.inertia + 1e-9 * std::max(1.0, opt.inertia)) ++suboptimal;
        for (const auto s : seeds) {
          const auto r = kmeans(x, k, s);
          ++runs;
          for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
            if (r.inertia_history[i] > r.inertia_history[i - 1] * (1 + 1e-12) + 1e-300) ++increases;
          }
        }
      }
    }
  }
  return {suboptimal == 0 && increases == 0,
          fmt("%d instances x 50 seeds: %d above the exhaustive optimum; %d inertia increases over %d runs", instances,
              suboptimal, increases, runs)};
}

// ---------------------------------------------------------------------------

Outcome hungarian_criterion() {
  Rng rng(500);
  int mismatches = 0;
  for (int t = 0; t < 500; ++t) {
    const auto r = 1 + rng.index(6), c = 1 + rng.index(6);
    MatrixD m(r, c);
    const bool integer = t % 2 == 0;
    for (auto& v : m.data()) v = integer ? static_cast<double>(rng.index(10)) : rng.uniform(-100.0, 100.0);
    const auto a = hungarian(m);
    const double brute = oracle::brute_force_assignment(m);
    double sum = 0;
    std::set<std::int32_t> cols;
    std::size_t matched = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (a.row_to_col[i] < 0) continue;
      sum += m(i, a.row_to_col[i]);
      cols.insert(a.row_to_col[i]);
      ++matched;
    }
    const bool ok = std::abs(a.cost - brute) <= 1e-9 * std::max(1.0, std::abs(brute)) &&
                    std::abs(sum - a.cost) <= 1e-9 * std::max(1.0, std::abs(sum)) && matched == std::min(r, c) &&
                    cols.size() == matched;
    mismatches += !ok;
  }
  return {mismatches == 0, fmt("500 matrices up to 6x6, %d mismatches", mismatches)};
}

// ---------------------------------------------------------------------------

// Writes the task and runs every stage with default hyperparameters.
EvalSummary run_task(const SynthSpec& spec, const fs::path& dir, std::uint64_t pipeline_seed = 42) {
  write_task(generate_task(spec), dir / "task");
  PipelineConfig cfg;
  cfg.manifest = dir / "task" / "manifest.json";
  cfg.output = dir / "out";
  cfg.walk.seed = pipeline_seed;
  cfg.train.seed = pipeline_seed;
  cfg.cluster.seed = pipeline_seed;
  Pipeline(cfg).run(Stage::All);
  return load_eval_summary(cfg.output);
}

Outcome planted_recovery_criterion() {
  test::TempDir a("accept-a"), b("accept-b");
  const auto noisy = run_task(synth_a_spec(), a.path());
  auto clean = synth_a_spec();
  clean.noise = 0;
  clean.background_fraction = 0;
  const auto exact = run_task(clean, b.path());
  const bool ok = noisy.f1 >= 0.85 && noisy.iou >= 0.70 && exact.f1 == 1.0;
  return {ok, fmt("synth-A F1 %.4f IoU %.4f; zero-noise F1 %.17g", noisy.f1, noisy.iou, exact.f1)};
}

Outcome multi_video_criterion() {
  std::map<std::uint32_t, double> mean;
  std::string detail;
  for (std::uint32_t n : {2u, 4u, 6u}) {
    auto spec = synth_a_spec();
    spec.videos = n;
    double total = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      test::TempDir dir("accept-n");
      total += run_task(spec, dir.path(), seed).f1;
    }
    mean[n] = total / 5;
    detail += fmt("n=%u mean F1 %.4f; ", n, mean[n]);
  }
  const bool ok = mean[4] >= mean[2] - 0.02 && mean[6] >= mean[4] - 0.02;
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

// ---------------------------------------------------------------------------

std::uint64_t evaluations(std::size_t n, std::size_t z, Rng& rng) {
  std::vector<VideoFeatures> vids;
  for (std::size_t v = 0; v < n; ++v) vids.push_back(test::random_video(rng, "v" + std::to_string(v), z, 8));
  return build_unity_graph(vids).build_stats.similarity_evaluations;
}

Outcome cost_model_criterion() {
  Rng rng(1);
  int failures = 0, checks = 0;
  for (std::size_t n : {2u, 3u, 5u}) {
    for (std::size_t z : {5u, 10u, 20u}) {
      ++checks;
      failures += evaluations(n, 2 * z, rng) != 4 * evaluations(n, z, rng);
    }
  }
  for (std::size_t z : {4u, 12u}) {
    for (auto [n, n2] : {std::pair<std::size_t, std::size_t>{2, 3}, {2, 6}, {3, 5}, {4, 8}}) {
      ++checks;
      // cross-multiplied so the comparison stays in integers
      failures += evaluations(n2, z, rng) * (n * (n - 1)) != evaluations(n, z, rng) * (n2 * (n2 - 1));
    }
  }
  return {failures == 0, fmt("%d exact counter ratios checked, %d off", checks, failures)};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"cosine similarity matches high-precision oracle", 5, cosine_criterion},
      {"graph topology: pick and temporal counts, scale invariance", 30, topology_criterion},
      {"node2vec transition distributions", 60, transitions_criterion},
      {"sgns gradient vs central differences", 5, sgns_gradient_criterion},
      {"kmeans restarts reach exhaustive optimum, inertia monotone", 60, kmeans_criterion},
      {"hungarian equals brute-force assignment", 10, hungarian_criterion},
      {"planted key-step recovery on synth-A and zero-noise variant", 300, planted_recovery_criterion},
      {"mean F1 non-decreasing in video count", 900, multi_video_criterion},
      {"similarity evaluation counts follow the cost model", 30, cost_model_criterion},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = out.pass && in_time;
    failed += !pass;
    std::printf("%s %s: %s [%.2fs of %.0fs]%s\n", pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs,
                c.budget_seconds, in_time ? "" : " over time budget");
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
