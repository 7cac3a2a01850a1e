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


#include "gpl/projection.hpp"

#include <cmath>

#include "gpl/error.hpp"
#include "gpl/graph_io.hpp"
#include "gpl/rng.hpp"

namespace gpl {

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

void orthogonalize(std::vector<double>& v, std::span<const double> against) {
  double d = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) d += v[j] * against[j];
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= d * against[j];
}

// Leading eigenvector of the symmetric matrix `c`, restricted to the
// complement of `exclude` when given.
std::vector<double> power_iteration(const MatrixD& c, std::span<const double> exclude,
                                    double& eigenvalue) {
  const std::size_t d = c.rows();
  std::vector<double> v(d), next(d);
  Rng rng(0x9ca2);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  if (!exclude.empty()) orthogonalize(v, exclude);
  double nv = norm(v);
  for (auto& x : v) x /= nv;

  eigenvalue = 0.0;
  for (int iter = 0; iter < 20000; ++iter) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += c(i, j) * v[j];
      next[i] = s;
    }
    if (!exclude.empty()) orthogonalize(next, exclude);
    const double nn = norm(next);
    if (nn < 1e-300) {
      eigenvalue = 0.0;
      return v;  // null space: any unit vector orthogonal to `exclude`
    }
    double change = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      next[i] /= nn;
      change = std::max(change, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    eigenvalue = nn;
    if (change < 1e-13) break;
  }
  return v;
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
  if (v[arg] < 0.0)
    for (auto& x : v) x = -x;
}

}  // namespace

Projection pca2(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n == 0 || d == 0) throw Error(ErrorCode::RangeError, "pca2: empty input");

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x(i, j);
  for (auto& m : mean) m /= static_cast<double>(n);

  MatrixD centered(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) centered(i, j) = x(i, j) - mean[j];

  MatrixD cov(d, d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = centered.row(i);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) cov(a, b) += r[a] * r[b];
  }
  for (auto& c : cov.data()) c /= static_cast<double>(n);

  Projection p;
  p.components = MatrixD(2, d, 0.0);
  auto first = power_iteration(cov, {}, p.explained[0]);
  fix_sign(first);
  std::vector<double> second;
  if (d >= 2) {
    second = power_iteration(cov, first, p.explained[1]);
    fix_sign(second);
  } else {
    second.assign(d, 0.0);
  }
  for (std::size_t j = 0; j < d; ++j) {
    p.components(0, j) = first[j];
    p.components(1, j) = second[j];
  }

  p.coords = MatrixD(n, 2, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = centered.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      p.coords(i, 0) += r[j] * first[j];
      p.coords(i, 1) += r[j] * second[j];
    }
  }
  return p;
}

std::string format_projection_csv(const NodeEmbeddings& emb,
                                  std::span<const std::uint32_t> clusters,
                                  const Projection& proj) {
  if (clusters.size() != emb.ids.size() || proj.coords.rows() != emb.ids.size()) {
    throw Error(ErrorCode::LengthMismatch, "projection: row counts differ");
  }
  std::string out = "video,clip,cluster,x,y\n";
  for (std::size_t i = 0; i < emb.ids.size(); ++i) {
    out += std::to_string(emb.ids[i].video) + ',' + std::to_string(emb.ids[i].clip) + ',' +
           std::to_string(clusters[i]) + ',' + format_double(proj.coords(i, 0)) + ',' +
           format_double(proj.coords(i, 1)) + '\n';
  }
  return out;
}

}  // namespace gpl
