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

#include "ginv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "ginv/errors.hpp"

namespace ginv::kernels {

int threads_from_env() {
  const char* env = std::getenv("GINV_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 1024));
}

IndexList rows_by_decreasing_norm(const Vector& norms) {
  IndexList order(static_cast<std::size_t>(norms.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return norms[a] > norms[b]; });
  return order;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

Index chunk_count(Index rows) { return (rows + kRowChunk - 1) / kRowChunk; }

// Scale factor of the row-wise shrinkage prox of ||.||_{2,1}.
inline double shrink_factor(double norm, double rho) {
  const double kappa = 1.0 / rho;
  return norm > kappa ? (norm - kappa) / norm : 0.0;
}

inline double soft(double a, double kappa) {
  if (a > kappa) return a - kappa;
  if (a < -kappa) return a + kappa;
  return 0.0;
}

// Writes the capped shrinkage given row norms; shared by both backends.
void capped_from_norms(const DenseMatrix& y, const Vector& norms, double rho,
                       Index gamma, bool shrink, DenseMatrix& e) {
  e.setZero(y.rows(), y.cols());
  if (gamma <= 0) return;
  const IndexList order = rows_by_decreasing_norm(norms);
  const Index keep = std::min<Index>(gamma, y.rows());
  for (Index pos = 0; pos < keep; ++pos) {
    const Index i = order[static_cast<std::size_t>(pos)];
    if (shrink) {
      const double s = shrink_factor(norms[i], rho);
      if (s > 0.0) e.row(i) = s * y.row(i);
    } else if (norms[i] > 0.0) {
      e.row(i) = y.row(i);
    }
  }
}

}  // namespace

namespace serial {

void multiply(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  c.setZero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (Index j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
}

void multiply_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  require(a.rows() == b.rows(), "multiply_tn: inner dimensions differ");
  c.setZero(a.cols(), b.cols());
  for (Index k = 0; k < a.rows(); ++k) {
    for (Index i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      for (Index j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
    }
  }
}

void multiply_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c) {
  require(a.cols() == b.cols(), "multiply_nt: inner dimensions differ");
  c.resize(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.rows(); ++j) {
      double acc = 0.0;
      for (Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
      c(i, j) = acc;
    }
  }
}

void row_norms(const DenseMatrix& y, Vector& out) {
  out.resize(y.rows());
  for (Index i = 0; i < y.rows(); ++i) {
    double acc = 0.0;
    for (Index j = 0; j < y.cols(); ++j) acc += y(i, j) * y(i, j);
    out[i] = std::sqrt(acc);
  }
}

void soft_threshold(const DenseMatrix& y, double kappa, DenseMatrix& e) {
  e.resize(y.rows(), y.cols());
  for (Index i = 0; i < y.rows(); ++i)
    for (Index j = 0; j < y.cols(); ++j) e(i, j) = soft(y(i, j), kappa);
}

void row_shrink(const DenseMatrix& y, double rho, DenseMatrix& e) {
  Vector norms;
  row_norms(y, norms);
  e.resize(y.rows(), y.cols());
  for (Index i = 0; i < y.rows(); ++i) {
    const double s = shrink_factor(norms[i], rho);
    for (Index j = 0; j < y.cols(); ++j) e(i, j) = s * y(i, j);
  }
}

void project_row_support(const DenseMatrix& y, Index gamma, DenseMatrix& e) {
  Vector norms;
  row_norms(y, norms);
  capped_from_norms(y, norms, 1.0, gamma, /*shrink=*/false, e);
}

void row_shrink_capped(const DenseMatrix& y, double rho, Index gamma,
                       DenseMatrix& e) {
  Vector norms;
  row_norms(y, norms);
  capped_from_norms(y, norms, rho, gamma, /*shrink=*/true, e);
}

}  // namespace serial

namespace omp {

void multiply(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
              int threads) {
  require(a.cols() == b.rows(), "multiply: inner dimensions differ");
  if (a.cols() == 0) {
    c.setZero(a.rows(), b.cols());
    return;
  }
  c.resize(a.rows(), b.cols());
  const Index chunks = chunk_count(c.rows());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index ch = 0; ch < chunks; ++ch) {
    const Index r0 = ch * kRowChunk;
    const Index len = std::min(kRowChunk, c.rows() - r0);
    c.middleRows(r0, len).noalias() = a.middleRows(r0, len) * b;
  }
}

void multiply_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                 int threads) {
  require(a.rows() == b.rows(), "multiply_tn: inner dimensions differ");
  if (a.rows() == 0) {
    c.setZero(a.cols(), b.cols());
    return;
  }
  c.resize(a.cols(), b.cols());
  const Index chunks = chunk_count(c.rows());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index ch = 0; ch < chunks; ++ch) {
    const Index r0 = ch * kRowChunk;
    const Index len = std::min(kRowChunk, c.rows() - r0);
    c.middleRows(r0, len).noalias() = a.middleCols(r0, len).transpose() * b;
  }
}

void multiply_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                 int threads) {
  require(a.cols() == b.cols(), "multiply_nt: inner dimensions differ");
  if (a.cols() == 0) {
    c.setZero(a.rows(), b.rows());
    return;
  }
  c.resize(a.rows(), b.rows());
  const Index chunks = chunk_count(c.rows());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index ch = 0; ch < chunks; ++ch) {
    const Index r0 = ch * kRowChunk;
    const Index len = std::min(kRowChunk, c.rows() - r0);
    c.middleRows(r0, len).noalias() = a.middleRows(r0, len) * b.transpose();
  }
}

void row_norms(const DenseMatrix& y, Vector& out, int threads) {
  out.resize(y.rows());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index i = 0; i < y.rows(); ++i) out[i] = y.row(i).norm();
}

void soft_threshold(const DenseMatrix& y, double kappa, DenseMatrix& e,
                    int threads) {
  e.resize(y.rows(), y.cols());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index i = 0; i < y.rows(); ++i)
    for (Index j = 0; j < y.cols(); ++j) e(i, j) = soft(y(i, j), kappa);
}

void row_shrink(const DenseMatrix& y, double rho, DenseMatrix& e,
                int threads) {
  e.resize(y.rows(), y.cols());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Index i = 0; i < y.rows(); ++i) {
    const double s = shrink_factor(y.row(i).norm(), rho);
    e.row(i) = s * y.row(i);
  }
}

void project_row_support(const DenseMatrix& y, Index gamma, DenseMatrix& e,
                         int threads) {
  Vector norms;
  row_norms(y, norms, threads);
  capped_from_norms(y, norms, 1.0, gamma, /*shrink=*/false, e);
}

void row_shrink_capped(const DenseMatrix& y, double rho, Index gamma,
                       DenseMatrix& e, int threads) {
  Vector norms;
  row_norms(y, norms, threads);
  capped_from_norms(y, norms, rho, gamma, /*shrink=*/true, e);
}

}  // namespace omp

}  // namespace ginv::kernels
