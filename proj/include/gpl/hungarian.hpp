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
#include <vector>

#include "gpl/matrix.hpp"

namespace gpl {

struct Assignment {
  std::vector<std::int32_t> row_to_col;  // -1 for rows left unmatched
  double cost = 0.0;
};

// Minimum-cost one-to-one assignment of size min(rows, cols). Rectangular
// inputs are padded to square with zero-cost dummies. O(n^3).
Assignment hungarian(const MatrixD& cost);

}  // namespace gpl
