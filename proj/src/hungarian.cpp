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


#include "gpl/hungarian.hpp"

#include <cmath>
#include <limits>

#include "gpl/error.hpp"

namespace gpl {

Assignment hungarian(const MatrixD& cost) {
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  for (const double c : cost.data()) {
    if (!std::isfinite(c)) throw Error(ErrorCode::NumericalError, "hungarian: non-finite cost");
  }
  Assignment result;
  result.row_to_col.assign(rows, -1);
  const std::size_t n = std::max(rows, cols);
  if (n == 0) return result;

  const auto at = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? cost(i, j) : 0.0;
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Shortest augmenting paths with row/column potentials; index 0 is a
  // sentinel, real rows and columns are 1-based.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match[j];
    if (i == 0 || i > rows || j > cols) continue;
    result.row_to_col[i - 1] = static_cast<std::int32_t>(j - 1);
    result.cost += cost(i - 1, j - 1);
  }
  return result;
}

}  // namespace gpl
