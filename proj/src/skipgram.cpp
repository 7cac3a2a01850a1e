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


#include "gpl/skipgram.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "gpl/alias_table.hpp"
#include "gpl/error.hpp"

namespace gpl {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// log(sigmoid(x)) without overflow
double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

class Trainer {
 public:
  Trainer(const WalkCorpus& corpus, const TrainConfig& cfg, std::size_t n)
      : corpus_(corpus), cfg_(cfg), n_(n), d_(cfg.dim) {
    const Matrix init = initial_embeddings(n, cfg);
    input_.assign(init.data().begin(), init.data().end());
    context_.assign(n * d_, 0.0);

    std::vector<double> counts(n, 0.0);
    for (const auto& walk : corpus.walks) {
      for (const auto v : walk) {
        if (v >= n) throw Error(ErrorCode::RangeError, "skipgram: walk node out of range");
        counts[v] += 1.0;
      }
    }
    for (auto& c : counts) c = std::pow(c, 0.75);
    negatives_ = AliasTable(counts);

    for (const auto& walk : corpus.walks) total_tokens_ += walk.size();
    total_tokens_ *= cfg.epochs;
  }

  // Processes walks [begin, end) of one epoch. `Shared` switches parameter
  // access to relaxed atomics for unsynchronized multi-threaded training.
  template <bool Shared>
  void run(std::size_t begin, std::size_t end, std::uint64_t stream,
           std::atomic<std::uint64_t>& processed) {
    Rng rng(derive_seed(cfg_.seed, 0x6e6567ULL, stream));
    const std::size_t k = cfg_.negatives;
    std::vector<double> center(d_), grad_center(d_);
    std::vector<double> target_buf((k + 1) * d_), grad_targets((k + 1) * d_);
    std::vector<std::uint32_t> target_ids;
    std::vector<std::span<const double>> targets;
    target_ids.reserve(k + 1);
    targets.reserve(k + 1);
    const double lr0 = cfg_.learning_rate;

    for (std::size_t w = begin; w < end; ++w) {
      const auto& walk = corpus_.walks[w];
      const std::uint64_t done = processed.fetch_add(walk.size(), std::memory_order_relaxed);
      const double progress =
          static_cast<double>(done) / static_cast<double>(std::max<std::uint64_t>(1, total_tokens_));
      const double lr = lr0 * (1.0 - 0.99 * std::min(1.0, progress));

      for (std::size_t i = 0; i < walk.size(); ++i) {
        const auto c = walk[i];
        const std::size_t lo = i >= cfg_.window ? i - cfg_.window : 0;
        const std::size_t hi = std::min(walk.size() - 1, i + cfg_.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const auto o = walk[j];
          target_ids.clear();
          target_ids.push_back(o);
          for (std::size_t s = 0; s < k; ++s) {
            const auto neg = negatives_.sample(rng);
            if (neg != o) target_ids.push_back(neg);
          }
          load<Shared>(&input_[std::size_t{c} * d_], center.data());
          targets.clear();
          for (std::size_t t = 0; t < target_ids.size(); ++t) {
            load<Shared>(&context_[std::size_t{target_ids[t]} * d_], &target_buf[t * d_]);
            targets.emplace_back(&target_buf[t * d_], d_);
          }
          sgns_loss_gradient(center, targets, grad_center,
                             std::span<double>(grad_targets.data(), targets.size() * d_));
          for (std::size_t t = 0; t < target_ids.size(); ++t) {
            apply<Shared>(&context_[std::size_t{target_ids[t]} * d_], &grad_targets[t * d_], lr);
          }
          apply<Shared>(&input_[std::size_t{c} * d_], grad_center.data(), lr);
        }
      }
    }
  }

  void check_finite(std::uint32_t epoch) const {
    for (std::size_t i = 0; i < input_.size(); ++i) {
      if (!std::isfinite(input_[i]) || !std::isfinite(context_[i])) {
        throw Error(ErrorCode::NumericalError,
                    "skipgram: non-finite parameter for node " + std::to_string(i / d_) +
                        " after epoch " + std::to_string(epoch) + " (learning rate " +
                        lr_text() + ")");
      }
    }
  }

  std::string lr_text() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", cfg_.learning_rate);
    return buf;
  }

  Matrix result() const {
    Matrix out(n_, d_);
    for (std::size_t i = 0; i < input_.size(); ++i) out.data()[i] = static_cast<float>(input_[i]);
    return out;
  }

 private:
  template <bool Shared>
  void load(double* src, double* dst) const {
    if constexpr (Shared) {
      for (std::size_t j = 0; j < d_; ++j) {
        dst[j] = std::atomic_ref<double>(src[j]).load(std::memory_order_relaxed);
      }
    } else {
      std::copy(src, src + d_, dst);
    }
  }

  template <bool Shared>
  void apply(double* param, const double* grad, double lr) const {
    for (std::size_t j = 0; j < d_; ++j) {
      if constexpr (Shared) {
        std::atomic_ref<double>(param[j]).fetch_add(-lr * grad[j], std::memory_order_relaxed);
      } else {
        param[j] -= lr * grad[j];
      }
    }
  }

  const WalkCorpus& corpus_;
  const TrainConfig& cfg_;
  std::size_t n_;
  std::size_t d_;
  std::vector<double> input_;
  std::vector<double> context_;
  AliasTable negatives_;
  std::uint64_t total_tokens_ = 0;
};

}  // namespace

void TrainConfig::validate() const {
  if (dim < 2) throw Error(ErrorCode::ConfigError, "train: dim must be >= 2");
  if (window < 1) throw Error(ErrorCode::ConfigError, "train: window must be >= 1");
  if (negatives < 1) throw Error(ErrorCode::ConfigError, "train: negatives must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::ConfigError, "train: learning_rate must be > 0");
  }
}

double sgns_loss(std::span<const double> center,
                 std::span<const std::span<const double>> targets) {
  double loss = 0.0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double x = dot(center, targets[t]);
    loss -= t == 0 ? log_sigmoid(x) : log_sigmoid(-x);
  }
  return loss;
}

double sgns_loss_gradient(std::span<const double> center,
                          std::span<const std::span<const double>> targets,
                          std::span<double> grad_center, std::span<double> grad_targets) {
  const std::size_t d = center.size();
  std::fill(grad_center.begin(), grad_center.end(), 0.0);
  double loss = 0.0;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const auto u = targets[t];
    const double x = dot(center, u);
    // d/dx of -log sig(x) is sig(x) - 1; of -log sig(-x) is sig(x)
    const double g = t == 0 ? sigmoid(x) - 1.0 : sigmoid(x);
    loss -= t == 0 ? log_sigmoid(x) : log_sigmoid(-x);
    for (std::size_t j = 0; j < d; ++j) {
      grad_center[j] += g * u[j];
      grad_targets[t * d + j] = g * center[j];
    }
  }
  return loss;
}

Matrix initial_embeddings(std::size_t node_count, const TrainConfig& cfg) {
  Matrix m(node_count, cfg.dim);
  Rng rng(derive_seed(cfg.seed, 0x1a17ULL));
  const double scale = 1.0 / static_cast<double>(cfg.dim);
  for (auto& v : m.data()) v = static_cast<float>((rng.uniform() - 0.5) * scale);
  return m;
}

Matrix train_skipgram(const WalkCorpus& corpus, const TrainConfig& cfg, std::size_t node_count,
                      const TrainOptions& options) {
  cfg.validate();
  if (corpus.walks.empty()) throw Error(ErrorCode::RangeError, "skipgram: empty corpus");
  Trainer trainer(corpus, cfg, node_count);
  std::atomic<std::uint64_t> processed{0};
  const std::size_t walks = corpus.walks.size();

  for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const unsigned threads = options.deterministic ? 1u : std::max(1u, options.threads);
    if (threads == 1) {
      trainer.run<false>(0, walks, epoch, processed);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = walks * t / threads;
        const std::size_t end = walks * (t + 1) / threads;
        pool.emplace_back([&, begin, end, t] {
          trainer.run<true>(begin, end, std::uint64_t{epoch} * threads + t + 1000, processed);
        });
      }
    }
    trainer.check_finite(epoch);
  }
  return trainer.result();
}

}  // namespace gpl
