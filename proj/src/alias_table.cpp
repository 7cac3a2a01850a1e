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


#include "gpl/alias_table.hpp"

#include <numeric>

#include "gpl/error.hpp"

namespace gpl {

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) return;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::NumericalError, "alias table: zero total weight");

  prob_.resize(n);
  alias_.resize(n);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0.0) throw Error(ErrorCode::NumericalError, "alias table: negative weight");
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // leftovers are 1 up to rounding
  for (const auto i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (const auto i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

std::uint32_t AliasTable::sample(Rng& rng) const {
  const auto i = static_cast<std::uint32_t>(rng.index(prob_.size()));
  return rng.uniform() < prob_[i] ? i : alias_[i];
}

double AliasTable::probability(std::size_t i) const {
  const double n = static_cast<double>(prob_.size());
  double p = prob_[i] / n;
  for (std::size_t j = 0; j < prob_.size(); ++j) {
    if (j != i && alias_[j] == i) p += (1.0 - prob_[j]) / n;
  }
  return p;
}

}  // namespace gpl
