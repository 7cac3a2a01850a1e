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


#include <doctest.h>

#include <cmath>
#include <map>

#include "gpl/alias_table.hpp"
#include "gpl/embedding_io.hpp"
#include "gpl/error.hpp"
#include "gpl/node2vec.hpp"
#include "gpl/skipgram.hpp"
#include "test_util.hpp"

using namespace gpl;

namespace {

// Node i is the only clip of video i, so any pair may carry a spatial edge.
UnityGraph make_graph(std::uint32_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs,
                      std::vector<double> weights = {}) {
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
    edges.push_back({pairs[i].first, pairs[i].second, EdgeKind::Spatial,
                     weights.empty() ? 1.0 : weights[i]});
  }
  return UnityGraph(ids, nodes, times, edges);
}

double prob_of(const UnityGraph& g, const std::vector<double>& probs, std::uint32_t cur,
               std::uint32_t target) {
  const auto nb = g.neighbors(cur);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    if (nb[i] == target) return probs[i];
  }
  return 0.0;
}

// unnormalized bias straight from the definition
double bias(const UnityGraph& g, double p, double q, std::uint32_t prev, std::uint32_t x) {
  if (x == prev) return 1.0 / p;
  return g.has_edge(prev, x) ? 1.0 : 1.0 / q;
}

}  // namespace

TEST_CASE("alias table reproduces weights") {
  const std::vector<double> w{1, 0, 3, 6};
  const AliasTable t(w);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(t.probability(i) == doctest::Approx(w[i] / 10));
  Rng rng(4);
  std::vector<int> hits(4, 0);
  for (int i = 0; i < 100000; ++i) ++hits[t.sample(rng)];
  CHECK(hits[1] == 0);
  CHECK(std::abs(hits[3] / 1e5 - 0.6) < 0.01);
}

TEST_CASE("transitions: path and triangle closed forms") {
  const auto path = make_graph(3, {{0, 1}, {1, 2}});
  auto pr = transition_probabilities(path, 1, 1, 0u, 1);
  CHECK(prob_of(path, pr, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prob_of(path, pr, 1, 2) == doctest::Approx(0.5).epsilon(1e-12));
  pr = transition_probabilities(path, 2, 0.5, 0u, 1);
  CHECK(std::abs(prob_of(path, pr, 1, 0) - 0.2) < 1e-12);
  CHECK(std::abs(prob_of(path, pr, 1, 2) - 0.8) < 1e-12);

  const auto tri = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  for (double p : {0.25, 1.0, 3.0}) {
    for (double q : {0.5, 2.0}) {
      pr = transition_probabilities(tri, p, q, 0u, 1);
      CHECK(std::abs(prob_of(tri, pr, 1, 0) - (1 / p) / (1 / p + 1)) < 1e-12);
      CHECK(std::abs(prob_of(tri, pr, 1, 2) - 1 / (1 / p + 1)) < 1e-12);
    }
  }
}

TEST_CASE("transitions: random weighted graphs match the definition") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.index(8));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<double> weights;
    for (std::uint32_t a = 0; a < n; ++a) {
      for (std::uint32_t b = a + 1; b < n; ++b) {
        if (rng.bernoulli(0.4)) {
          pairs.emplace_back(a, b);
          weights.push_back(rng.uniform(0.1, 2.0));
        }
      }
    }
    const auto g = make_graph(n, pairs, weights);
    const double p = rng.uniform(0.25, 4.0), q = rng.uniform(0.25, 4.0);
    for (std::uint32_t cur = 0; cur < n; ++cur) {
      const auto nb = g.neighbors(cur);
      const auto w = g.neighbor_weights(cur);
      if (nb.empty()) continue;
      for (std::uint32_t prev : nb) {
        const auto pr = transition_probabilities(g, p, q, prev, cur);
        double total = 0, norm = 0;
        for (std::size_t i = 0; i < nb.size(); ++i) norm += w[i] * bias(g, p, q, prev, nb[i]);
        for (std::size_t i = 0; i < nb.size(); ++i) {
          CHECK(pr[i] >= 0.0);
          CHECK(std::abs(pr[i] - w[i] * bias(g, p, q, prev, nb[i]) / norm) < 1e-12);
          total += pr[i];
        }
        CHECK(std::abs(total - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("walks: degenerate graphs") {
  const auto lone = make_graph(1, {});
  WalkConfig cfg;
  cfg.walks_per_node = 3;
  cfg.walk_length = 5;
  const TransitionTables lone_tables(lone, 1, 1);
  CHECK(lone_tables.isolated_nodes().size() == 1);
  const auto corpus = generate_walks(lone_tables, cfg);
  REQUIRE(corpus.walks.size() == 3);
  for (const auto& w : corpus.walks) CHECK(w.size() == 1);

  const auto pair = make_graph(2, {{0, 1}});
  cfg.walk_length = 4;
  for (bool otf : {false, true}) {
    cfg.on_the_fly = otf;
    const TransitionTables t(pair, 2, 0.5, otf);
    for (const auto& w : generate_walks(t, cfg).walks) {
      REQUIRE(w.size() == 4);
      for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] != w[i - 1]);
    }
  }
}

TEST_CASE("walks: every step follows an edge and corpus is thread independent") {
  Rng rng(12);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t a = 0; a < 20; ++a) {
    for (std::uint32_t b = a + 1; b < 20; ++b) {
      if (rng.bernoulli(0.2)) pairs.emplace_back(a, b);
    }
  }
  const auto g = make_graph(20, pairs);
  WalkConfig cfg;
  cfg.walk_length = 30;
  cfg.walks_per_node = 4;
  const TransitionTables t(g, 1.5, 0.5);
  const auto a = generate_walks(t, cfg, 1);
  const auto b = generate_walks(t, cfg, 3);
  CHECK(a.walks == b.walks);
  CHECK(a.walks.size() == 80);
  for (const auto& w : a.walks) {
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(g.has_edge(w[i - 1], w[i]));
  }
}

TEST_CASE("walks: star graph second-step frequencies") {
  // center 0 with leaves 1..3; after arriving at 0 from leaf 1 every leaf is 1/3 at p=q=1
  const auto star = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  for (bool otf : {false, true}) {
    const TransitionTables t(star, 1, 1, otf);
    Rng rng(77);
    std::vector<int> hits(4, 0);
    const int steps = 100000;
    for (int i = 0; i < steps; ++i) ++hits[t.next_step(1, 0, rng)];
    for (int leaf = 1; leaf <= 3; ++leaf) CHECK(std::abs(hits[leaf] / double(steps) - 1.0 / 3) < 0.01);
  }
}

TEST_CASE("sgns gradient matches central differences") {
  Rng rng(5);
  const std::size_t d = 6, k = 4;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> center(d), flat((k + 1) * d);
    for (auto& v : center) v = rng.normal() * 0.5;
    for (auto& v : flat) v = rng.normal() * 0.5;
    std::vector<std::span<const double>> targets;
    for (std::size_t t = 0; t <= k; ++t) targets.emplace_back(&flat[t * d], d);
    std::vector<double> gc(d), gt((k + 1) * d);
    sgns_loss_gradient(center, targets, gc, gt);
    const double h = 1e-5;
    for (std::size_t j = 0; j < d; ++j) {
      auto plus = center, minus = center;
      plus[j] += h;
      minus[j] -= h;
      const double fd = (sgns_loss(plus, targets) - sgns_loss(minus, targets)) / (2 * h);
      CHECK(std::abs(fd - gc[j]) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
    for (std::size_t i = 0; i < flat.size(); ++i) {
      const double keep = flat[i];
      flat[i] = keep + h;
      const double up = sgns_loss(center, targets);
      flat[i] = keep - h;
      const double down = sgns_loss(center, targets);
      flat[i] = keep;
      const double fd = (up - down) / (2 * h);
      CHECK(std::abs(fd - gt[i]) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("skipgram: zero epochs returns the initialization") {
  WalkCorpus corpus{{{0, 1, 2, 1, 0}}};
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 0;
  CHECK(train_skipgram(corpus, cfg, 3) == initial_embeddings(3, cfg));
  const auto init = initial_embeddings(3, cfg);
  for (float v : init.data()) CHECK(std::abs(v) <= 0.5f / 8);
}

TEST_CASE("skipgram: co-occurring pair attracts and runs are reproducible") {
  // four alternating pairs; with only two nodes every negative would be the
  // center itself and the pair would be pushed apart
  WalkCorpus corpus;
  for (int r = 0; r < 10; ++r) {
    for (std::uint32_t p = 0; p < 4; ++p) {
      corpus.walks.push_back({2 * p, 2 * p + 1, 2 * p, 2 * p + 1, 2 * p, 2 * p + 1});
    }
  }
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.window = 2;
  cfg.epochs = 50;
  const auto a = train_skipgram(corpus, cfg, 8);
  const auto b = train_skipgram(corpus, cfg, 8);
  CHECK(a == b);
  double uv = 0, uu = 0, vv = 0;
  for (std::size_t j = 0; j < 16; ++j) {
    uv += double(a(0, j)) * a(1, j);
    uu += double(a(0, j)) * a(0, j);
    vv += double(a(1, j)) * a(1, j);
  }
  CHECK(uv / std::sqrt(uu * vv) > 0.9);
}

TEST_CASE("skipgram: two cliques separate") {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t a = 0; a < 5; ++a) {
    for (std::uint32_t b = a + 1; b < 5; ++b) {
      pairs.emplace_back(a, b);
      pairs.emplace_back(a + 5, b + 5);
    }
  }
  const auto g = make_graph(10, pairs);
  WalkConfig wc;
  wc.walk_length = 20;
  wc.walks_per_node = 10;
  const auto corpus = generate_walks(TransitionTables(g, 1, 1), wc);
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.window = 3;
  cfg.epochs = 5;
  const auto e = train_skipgram(corpus, cfg, 10);
  const auto cos = [&](std::size_t i, std::size_t j) {
    double uv = 0, uu = 0, vv = 0;
    for (std::size_t k = 0; k < 16; ++k) {
      uv += double(e(i, k)) * e(j, k);
      uu += double(e(i, k)) * e(i, k);
      vv += double(e(j, k)) * e(j, k);
    }
    return uv / std::sqrt(uu * vv);
  };
  double intra = 0, inter = 0;
  int ni = 0, nx = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i + 1; j < 10; ++j) {
      if ((i < 5) == (j < 5)) intra += cos(i, j), ++ni;
      else inter += cos(i, j), ++nx;
    }
  }
  CHECK(intra / ni > inter / nx);
}

TEST_CASE("skipgram: diverging learning rate raises NumericalError") {
  WalkCorpus corpus;
  for (int i = 0; i < 50; ++i) corpus.walks.push_back({0, 1, 2, 0, 1, 2});
  TrainConfig cfg;
  cfg.dim = 4;
  cfg.epochs = 3;
  cfg.learning_rate = 1e300;
  try {
    train_skipgram(corpus, cfg, 3);
    FAIL("expected NumericalError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NumericalError);
  }
}

TEST_CASE("embedding file") {
  test::TempDir dir("emb");
  Rng rng(6);
  NodeEmbeddings emb;
  emb.ids = {{0, 0}, {0, 2}, {1, 5}};
  emb.vectors = test::random_matrix(rng, 3, 2);
  write_embeddings(emb, dir / "e.uge");
  CHECK(load_embeddings(dir / "e.uge") == emb);

  test::Bytes b;
  b.str("UGE1").u32(1).u32(2).u32(1).u32(0).u32(0).u32(0).u32(1).f32(0.5f).f32(1.5f);
  const auto ok = decode_embeddings(b.data, "hand");
  CHECK(ok.vectors(1, 0) == 1.5f);
  CHECK(encode_embeddings(ok) == b.data);

  test::Bytes short_rows;
  short_rows.str("UGE1").u32(1).u32(3).u32(1).u32(0).u32(0).u32(0).u32(1).u32(0).u32(2).f32(0.5f).f32(1.5f);
  try {
    decode_embeddings(short_rows.data, "hand");
    FAIL("expected DimensionError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionError);
  }
}
