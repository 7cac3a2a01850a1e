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
#include <filesystem>
#include <span>
#include <vector>

#include "gpl/matrix.hpp"

namespace gpl {

struct KMeansOptions {
  double tol = 1e-6;  // stop when no centroid moves this far
  std::uint32_t max_iter = 300;
};

struct ClusterResult {
  std::vector<std::uint32_t> assignments;
  MatrixD centroids;  // K x d
  double inertia = 0.0;
  std::uint32_t iterations = 0;
  // Assignment cost after every assignment step, including the final one.
  std::vector<double> inertia_history;
  std::uint64_t seed = 0;
};

// k-means++ seeding: first centroid uniform over rows, then rows drawn with
// probability proportional to squared distance to the nearest chosen centroid.
// Throws KTooLarge if K > rows.
MatrixD kmeanspp_init(const Matrix& x, std::uint32_t k, std::uint64_t seed);

// Lloyd iterations from k-means++ seeds. Squared Euclidean distance in double
// precision, ties to the lowest cluster id. An empty cluster takes the point
// farthest from its own centroid.
ClusterResult kmeans(const Matrix& x, std::uint32_t k, std::uint64_t seed,
                     const KMeansOptions& options = {});

// Lowest-inertia run over the seeds; ties keep the earliest seed.
ClusterResult best_of_restarts(const Matrix& x, std::uint32_t k,
                               std::span<const std::uint64_t> seeds,
                               const KMeansOptions& options = {});

std::vector<std::uint64_t> restart_seeds(std::uint64_t base, std::uint32_t restarts);

double inertia(const Matrix& x, std::span<const std::uint32_t> assignments,
               const MatrixD& centroids);

// UGC1: magic | K u32 | dim u32 | K*dim f32.
std::vector<char> encode_centroids(const MatrixD& centroids);
Matrix decode_centroids(std::vector<char> bytes, const std::string& source);
void write_centroids(const MatrixD& centroids, const std::filesystem::path& path);
Matrix load_centroids(const std::filesystem::path& path);

}  // namespace gpl
