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


#include "gpl/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "binary_io.hpp"
#include "gpl/error.hpp"
#include "gpl/rng.hpp"

namespace gpl {

namespace {

constexpr std::string_view kMagic = "UGC1";

double sq_dist(std::span<const float> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = static_cast<double>(a[j]) - b[j];
    s += diff * diff;
  }
  return s;
}

double sq_dist(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = static_cast<double>(a[j]) - static_cast<double>(b[j]);
    s += diff * diff;
  }
  return s;
}

void check_input(const Matrix& x, std::uint32_t k) {
  if (k == 0) throw Error(ErrorCode::ConfigError, "kmeans: K must be >= 1");
  if (k > x.rows()) {
    throw Error(ErrorCode::KTooLarge, "kmeans: K=" + std::to_string(k) + " exceeds " +
                                          std::to_string(x.rows()) + " points");
  }
  for (const float v : x.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NumericalError, "kmeans: non-finite input");
  }
}

// Nearest centroid per point; returns per-point squared distance.
std::vector<double> assign(const Matrix& x, const MatrixD& c,
                           std::vector<std::uint32_t>& assignments) {
  std::vector<double> dist(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_k = 0;
    for (std::size_t k = 0; k < c.rows(); ++k) {
      const double d = sq_dist(x.row(i), c.row(k));
      if (d < best) {
        best = d;
        best_k = static_cast<std::uint32_t>(k);
      }
    }
    assignments[i] = best_k;
    dist[i] = best;
  }
  return dist;
}

// Gives every empty cluster the point farthest from its centroid, taken from
// a cluster that keeps at least one member.
void repair_empty(const Matrix& x, MatrixD& c, std::vector<std::uint32_t>& assignments,
                  std::vector<double>& dist) {
  std::vector<std::size_t> sizes(c.rows(), 0);
  for (const auto a : assignments) ++sizes[a];
  for (std::size_t e = 0; e < c.rows(); ++e) {
    if (sizes[e] != 0) continue;
    std::size_t far = x.rows();
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (sizes[assignments[i]] < 2) continue;
      if (far == x.rows() || dist[i] > dist[far]) far = i;
    }
    assert(far < x.rows());
    --sizes[assignments[far]];
    assignments[far] = static_cast<std::uint32_t>(e);
    ++sizes[e];
    dist[far] = 0.0;
    const auto src = x.row(far);
    auto dst = c.row(e);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = src[j];
  }
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s;
}

}  // namespace

MatrixD kmeanspp_init(const Matrix& x, std::uint32_t k, std::uint64_t seed) {
  check_input(x, k);
  const std::size_t n = x.rows();
  Rng rng(derive_seed(seed, 0x6b6d7070ULL));
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  chosen.push_back(rng.index(n));
  taken[chosen.back()] = true;

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(x.row(i), x.row(chosen[0]));
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) total += d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || d2[i] == 0.0) continue;
        pick = i;
        target -= d2[i];
        if (target < 0.0) break;
      }
    } else {
      // every remaining row coincides with a centroid
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i]) free.push_back(i);
      pick = free[rng.index(free.size())];
    }
    chosen.push_back(pick);
    taken[pick] = true;
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(x.row(i), x.row(pick)));
  }

  MatrixD c(k, x.cols());
  for (std::size_t r = 0; r < k; ++r) {
    const auto src = x.row(chosen[r]);
    for (std::size_t j = 0; j < x.cols(); ++j) c(r, j) = src[j];
  }
  return c;
}

double inertia(const Matrix& x, std::span<const std::uint32_t> assignments,
               const MatrixD& centroids) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) s += sq_dist(x.row(i), centroids.row(assignments[i]));
  return s;
}

ClusterResult kmeans(const Matrix& x, std::uint32_t k, std::uint64_t seed,
                     const KMeansOptions& options) {
  check_input(x, k);
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  ClusterResult r;
  r.seed = seed;
  r.centroids = kmeanspp_init(x, k, seed);
  r.assignments.assign(n, 0);

  for (r.iterations = 1; r.iterations <= options.max_iter; ++r.iterations) {
    auto dist = assign(x, r.centroids, r.assignments);
    repair_empty(x, r.centroids, r.assignments, dist);
    r.inertia_history.push_back(sum(dist));
    assert(r.inertia_history.size() < 2 ||
           r.inertia_history.back() <=
               r.inertia_history[r.inertia_history.size() - 2] * (1.0 + 1e-12) + 1e-300);

    MatrixD next(k, d, 0.0);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = r.assignments[i];
      ++sizes[a];
      const auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) next(a, j) += row[j];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double moved = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        next(c, j) /= static_cast<double>(sizes[c]);
        const double diff = next(c, j) - r.centroids(c, j);
        moved += diff * diff;
      }
      shift = std::max(shift, std::sqrt(moved));
    }
    r.centroids = std::move(next);
    if (shift < options.tol) break;
  }
  r.iterations = std::min(r.iterations, options.max_iter);

  auto dist = assign(x, r.centroids, r.assignments);
  repair_empty(x, r.centroids, r.assignments, dist);
  r.inertia = sum(dist);
  r.inertia_history.push_back(r.inertia);
  return r;
}

ClusterResult best_of_restarts(const Matrix& x, std::uint32_t k,
                               std::span<const std::uint64_t> seeds,
                               const KMeansOptions& options) {
  if (seeds.empty()) throw Error(ErrorCode::ConfigError, "kmeans: no restart seeds");
  ClusterResult best = kmeans(x, k, seeds[0], options);
  for (std::size_t s = 1; s < seeds.size(); ++s) {
    auto r = kmeans(x, k, seeds[s], options);
    if (r.inertia < best.inertia) best = std::move(r);
  }
  return best;
}

std::vector<std::uint64_t> restart_seeds(std::uint64_t base, std::uint32_t restarts) {
  std::vector<std::uint64_t> seeds;
  for (std::uint32_t i = 0; i < restarts; ++i) seeds.push_back(base + i);
  return seeds;
}

std::vector<char> encode_centroids(const MatrixD& centroids) {
  detail::ByteWriter w;
  w.magic(kMagic);
  w.u32(static_cast<std::uint32_t>(centroids.rows()));
  w.u32(static_cast<std::uint32_t>(centroids.cols()));
  for (const double v : centroids.data()) w.f32(static_cast<float>(v));
  return w.bytes();
}

Matrix decode_centroids(std::vector<char> bytes, const std::string& source) {
  detail::ByteReader r(std::move(bytes), source);
  r.expect_magic(kMagic);
  const auto k = r.u32("K");
  const auto dim = r.u32("dim");
  if (r.remaining() != std::uint64_t{k} * dim * 4) {
    throw Error(ErrorCode::DimensionError, source + ": centroid payload size mismatch");
  }
  Matrix c(k, dim);
  r.f32s(c.data(), "centroids");
  return c;
}

void write_centroids(const MatrixD& centroids, const std::filesystem::path& path) {
  detail::write_file(path, encode_centroids(centroids));
}

Matrix load_centroids(const std::filesystem::path& path) {
  return decode_centroids(detail::read_file(path), path.string());
}

}  // namespace gpl
