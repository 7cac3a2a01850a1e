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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpl/alias_table.hpp"
#include "gpl/unity_graph.hpp"

namespace gpl {

struct WalkConfig {
  double p = 1.0;  // return parameter
  double q = 0.5;  // in-out parameter
  std::uint32_t walk_length = 80;
  std::uint32_t walks_per_node = 10;
  std::uint64_t seed = 42;
  // Recompute biases at every step instead of storing per-edge alias tables.
  bool on_the_fly = false;

  void validate() const;
};

// Normalized probabilities over neighbors(cur) for a walk that arrived at
// `cur` from `prev`. Without `prev` the step is first-order, proportional to
// edge weight. Otherwise each neighbor x gets weight(cur,x) times 1/p if
// x == prev, 1 if x is adjacent to prev, and 1/q otherwise.
std::vector<double> transition_probabilities(const UnityGraph& g, double p, double q,
                                             std::optional<std::uint32_t> prev,
                                             std::uint32_t cur);

// Sampling tables for every node (first step) and every directed edge
// (prev -> cur) of the graph.
class TransitionTables {
 public:
  TransitionTables(const UnityGraph& g, double p, double q, bool on_the_fly = false);

  // Next node ordinal; cur must have degree > 0.
  std::uint32_t first_step(std::uint32_t cur, Rng& rng) const;
  std::uint32_t next_step(std::uint32_t prev, std::uint32_t cur, Rng& rng) const;

  // Nodes with degree 0; walks from them have length 1.
  const std::vector<std::uint32_t>& isolated_nodes() const noexcept { return isolated_; }
  const UnityGraph& graph() const noexcept { return *graph_; }

 private:
  std::uint32_t sample_on_the_fly(std::optional<std::uint32_t> prev, std::uint32_t cur,
                                  Rng& rng) const;

  const UnityGraph* graph_;
  double p_;
  double q_;
  bool on_the_fly_;
  std::vector<AliasTable> first_;
  std::vector<AliasTable> second_;  // indexed by adjacency slot of prev within cur's list
  std::vector<std::uint32_t> isolated_;
};

using Walk = std::vector<std::uint32_t>;

struct WalkCorpus {
  std::vector<Walk> walks;

  std::size_t token_count() const;
};

// walks_per_node rounds; each round visits every node once in a seeded
// shuffled order. Every walk draws from its own stream derived from
// (seed, start node, round), so the corpus is identical for any thread count.
WalkCorpus generate_walks(const TransitionTables& tables, const WalkConfig& cfg,
                          unsigned threads = 1);

// One walk per line, space-separated video:clip tokens.
std::string format_walks(const WalkCorpus& corpus, const UnityGraph& g);

}  // namespace gpl
