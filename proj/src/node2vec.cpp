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


#include "gpl/node2vec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "gpl/error.hpp"

namespace gpl {

namespace {

std::vector<double> biased_weights(const UnityGraph& g, double p, double q,
                                   std::optional<std::uint32_t> prev, std::uint32_t cur) {
  const auto nb = g.neighbors(cur);
  const auto w = g.neighbor_weights(cur);
  std::vector<double> out(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k) {
    double alpha = 1.0;
    if (prev) {
      if (nb[k] == *prev) {
        alpha = 1.0 / p;
      } else if (!g.has_edge(*prev, nb[k])) {
        alpha = 1.0 / q;
      }
    }
    out[k] = alpha * w[k];
  }
  return out;
}

std::size_t slot_of(const UnityGraph& g, std::uint32_t cur, std::uint32_t prev) {
  const auto nb = g.neighbors(cur);
  const auto it = std::lower_bound(nb.begin(), nb.end(), prev);
  return g.adjacency_offset(cur) + static_cast<std::size_t>(it - nb.begin());
}

}  // namespace

void WalkConfig::validate() const {
  if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q)) {
    throw Error(ErrorCode::ConfigError, "walk: p and q must be positive");
  }
  if (walk_length < 2) throw Error(ErrorCode::ConfigError, "walk: length must be >= 2");
  if (walks_per_node < 1) throw Error(ErrorCode::ConfigError, "walk: walks_per_node must be >= 1");
}

std::vector<double> transition_probabilities(const UnityGraph& g, double p, double q,
                                             std::optional<std::uint32_t> prev,
                                             std::uint32_t cur) {
  auto w = biased_weights(g, p, q, prev, cur);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

TransitionTables::TransitionTables(const UnityGraph& g, double p, double q, bool on_the_fly)
    : graph_(&g), p_(p), q_(q), on_the_fly_(on_the_fly) {
  if (g.node_count() == 0) throw Error(ErrorCode::RangeError, "walk: empty graph");
  if (!(p > 0.0) || !(q > 0.0)) throw Error(ErrorCode::ConfigError, "walk: p, q must be > 0");
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) isolated_.push_back(v);
  }
  if (on_the_fly_) return;

  first_.resize(g.node_count());
  second_.resize(g.adjacency_size());
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) continue;
    first_[v] = AliasTable(g.neighbor_weights(v));
    const auto nb = g.neighbors(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const auto w = biased_weights(g, p, q, nb[k], v);
      second_[g.adjacency_offset(v) + k] = AliasTable(w);
    }
  }
}

std::uint32_t TransitionTables::sample_on_the_fly(std::optional<std::uint32_t> prev,
                                                  std::uint32_t cur, Rng& rng) const {
  const auto w = biased_weights(*graph_, p_, q_, prev, cur);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double target = rng.uniform() * total;
  for (std::size_t k = 0; k < w.size(); ++k) {
    target -= w[k];
    if (target < 0.0) return graph_->neighbors(cur)[k];
  }
  // rounding fell through: last neighbor with positive weight
  for (std::size_t k = w.size(); k-- > 0;) {
    if (w[k] > 0.0) return graph_->neighbors(cur)[k];
  }
  return graph_->neighbors(cur).back();
}

std::uint32_t TransitionTables::first_step(std::uint32_t cur, Rng& rng) const {
  if (on_the_fly_) return sample_on_the_fly(std::nullopt, cur, rng);
  return graph_->neighbors(cur)[first_[cur].sample(rng)];
}

std::uint32_t TransitionTables::next_step(std::uint32_t prev, std::uint32_t cur,
                                          Rng& rng) const {
  if (on_the_fly_) return sample_on_the_fly(prev, cur, rng);
  return graph_->neighbors(cur)[second_[slot_of(*graph_, cur, prev)].sample(rng)];
}

std::size_t WalkCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& w : walks) n += w.size();
  return n;
}

WalkCorpus generate_walks(const TransitionTables& tables, const WalkConfig& cfg,
                          unsigned threads) {
  cfg.validate();
  const auto& g = tables.graph();
  const std::size_t n = g.node_count();

  std::vector<std::uint32_t> starts;
  starts.reserve(n * cfg.walks_per_node);
  for (std::uint32_t round = 0; round < cfg.walks_per_node; ++round) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rng shuffle_rng(derive_seed(cfg.seed, 0x5eed0f5a11ULL, round));
    shuffle_rng.shuffle(order.begin(), order.end());
    starts.insert(starts.end(), order.begin(), order.end());
  }

  WalkCorpus corpus;
  corpus.walks.resize(starts.size());
  const auto walk_one = [&](std::size_t idx) {
    const std::uint32_t start = starts[idx];
    const std::uint64_t round = idx / n;
    Rng rng(derive_seed(cfg.seed, start, round + 1));
    Walk& walk = corpus.walks[idx];
    walk.reserve(cfg.walk_length);
    walk.push_back(start);
    if (g.degree(start) == 0) return;
    walk.push_back(tables.first_step(start, rng));
    while (walk.size() < cfg.walk_length) {
      const auto cur = walk.back();
      const auto prev = walk[walk.size() - 2];
      walk.push_back(tables.next_step(prev, cur, rng));
    }
  };

  threads = std::max(1u, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) walk_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < starts.size();) walk_one(i);
      });
    }
  }
  return corpus;
}

std::string format_walks(const WalkCorpus& corpus, const UnityGraph& g) {
  std::string out;
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      const auto& id = g.nodes()[walk[i]];
      if (i) out += ' ';
      out += std::to_string(id.video) + ':' + std::to_string(id.clip);
    }
    out += '\n';
  }
  return out;
}

}  // namespace gpl
