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
#include <string>
#include <vector>

#include "gpl/embedding_io.hpp"
#include "gpl/matrix.hpp"

namespace gpl {

struct Projection {
  MatrixD coords;      // N x 2
  MatrixD components;  // 2 x d, orthonormal rows
  double explained[2] = {0.0, 0.0};  // eigenvalues of the covariance
};

// Top-2 principal components by power iteration with deflation, from a fixed
// start vector. Component signs are fixed so the largest-magnitude entry is
// positive.
Projection pca2(const Matrix& x);

// CSV: video,clip,cluster,x,y
std::string format_projection_csv(const NodeEmbeddings& emb,
                                  std::span<const std::uint32_t> clusters,
                                  const Projection& proj);

}  // namespace gpl
