// Copyright 2026 The ginv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ginv/instances.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ginv/errors.hpp"

namespace ginv {
namespace {

constexpr int kMaxAttempts = 100;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform [0, 1) from the top 53 bits; std distributions are not portable.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DenseMatrix sparse_uniform(Index rows, Index cols, double density,
                           std::mt19937_64& rng) {
  const double scale = 1.0 / std::sqrt(density);
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double keep = unit(rng);
      const double value = 2.0 * unit(rng) - 1.0;
      out(i, j) = keep < density ? scale * value : 0.0;
    }
  }
  return out;
}

bool has_exact_rank(const DenseMatrix& a, Index r) {
  const Eigen::MatrixXd col = a;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(col);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return false;
  if (!(s[r - 1] / s[0] > 1e-6)) return false;
  return r == s.size() || s[r] / s[0] < 1e-10;
}

}  // namespace

InstanceSpec InstanceSpec::standard(Index m, std::uint64_t seed) {
  InstanceSpec spec;
  spec.m = m;
  spec.n = m / 2;
  spec.r = m / 4;
  spec.seed = seed;
  return spec;
}

void validate(const InstanceSpec& spec) {
  if (spec.m < 1 || spec.n < 1)
    throw InvalidArgument("instance: m and n must be positive");
  if (spec.r < 1 || spec.r > std::min(spec.m, spec.n)) {
    throw InvalidArgument("instance: r = " + std::to_string(spec.r) +
                          " must lie in [1, min(m, n)] = [1, " +
                          std::to_string(std::min(spec.m, spec.n)) + "]");
  }
  if (!(spec.density > 0.0 && spec.density <= 1.0))
    throw InvalidArgument("instance: density must lie in (0, 1]");
}

DenseMatrix gen_rank_r(const InstanceSpec& spec) {
  validate(spec);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::mt19937_64 rng(splitmix64(spec.seed + splitmix64(attempt)));
    const DenseMatrix left = sparse_uniform(spec.m, spec.r, spec.density, rng);
    const DenseMatrix right =
        sparse_uniform(spec.r, spec.n, spec.density, rng);
    DenseMatrix a = left * right;
    if (has_exact_rank(a, spec.r)) return a;
  }
  throw NumericalError("gen_rank_r: no rank-" + std::to_string(spec.r) +
                       " sample found; raise the density");
}

DenseMatrix worst_case_toeplitz(Index r, double delta) {
  DenseMatrix t(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j)
      t(i, j) = i > j ? 1.0 + static_cast<double>(i - j) * delta : 1.0;
  return t;
}

WorstCaseInstance worst_case_build(const WorstCaseSpec& spec) {
  const Index r = spec.r;
  if (r < 2) throw InvalidArgument("worst case: r must be at least 2");
  if (!(spec.delta > 0.0) || !std::isfinite(spec.delta))
    throw InvalidArgument("worst case: delta must be positive");
  const Index em = spec.embed_m == 0 ? r + 1 : spec.embed_m;
  const Index en = spec.embed_n == 0 ? r + 2 : spec.embed_n;
  if (em < r || en < r + 1)
    throw InvalidArgument("worst case: embedding needs >= r rows, >= r+1 cols");

  WorstCaseInstance out;
  out.toeplitz = worst_case_toeplitz(r, spec.delta);
  out.delta_is_large = spec.delta >= 0.5;

  Eigen::FullPivLU<DenseMatrix> lu(out.toeplitz);
  const double det = lu.determinant();
  const double expected = std::pow(-spec.delta, static_cast<double>(r - 1));
  if (!(std::abs(det - expected) <= 1e-8 * std::abs(expected))) {
    throw NumericalError("worst case: det(toeplitz) = " + std::to_string(det) +
                         ", expected " + std::to_string(expected));
  }
  out.a_tilde = lu.inverse();

  out.a_full = DenseMatrix::Zero(em, en);
  out.a_full.topLeftCorner(r, r) = out.a_tilde;
  out.b_column = r;
  out.a_full.col(r).head(r) = out.a_tilde.rowwise().sum();
  return out;
}

}  // namespace ginv
