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
#include <span>
#include <vector>

#include "gpl/matrix.hpp"
#include "gpl/node2vec.hpp"

namespace gpl {

struct TrainConfig {
  std::uint32_t dim = 128;
  std::uint32_t window = 10;
  std::uint32_t negatives = 5;
  std::uint32_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to learning_rate / 100
  std::uint64_t seed = 42;

  void validate() const;
};

struct TrainOptions {
  // false: unsynchronized updates from `threads` workers; results then vary
  // between runs.
  bool deterministic = true;
  unsigned threads = 1;
};

// Negated SGNS objective for one center vector, its true context (targets[0])
// and sampled negatives (targets[1..]):
//   loss = -log sig(u_o . v_c) - sum_n log sig(-u_n . v_c)
double sgns_loss(std::span<const double> center,
                 std::span<const std::span<const double>> targets);

// Same loss; also writes d loss / d center into grad_center and the gradient
// for targets[t] into grad_targets[t*d .. (t+1)*d). Duplicate targets get
// separate slots.
double sgns_loss_gradient(std::span<const double> center,
                          std::span<const std::span<const double>> targets,
                          std::span<double> grad_center, std::span<double> grad_targets);

// Seeded uniform initialization in [-0.5/dim, 0.5/dim].
Matrix initial_embeddings(std::size_t node_count, const TrainConfig& cfg);

// Skip-gram with negative sampling over the walk corpus. Negatives are drawn
// from corpus node frequencies raised to 3/4. Returns the input-vector matrix.
// Throws NumericalError if a parameter becomes non-finite.
Matrix train_skipgram(const WalkCorpus& corpus, const TrainConfig& cfg, std::size_t node_count,
                      const TrainOptions& options = {});

}  // namespace gpl
