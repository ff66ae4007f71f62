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

#include "ginv/local_search.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "ginv/errors.hpp"

namespace ginv {
namespace {

using ColMatrix = Eigen::MatrixXd;

constexpr double kBlockRankTol = 1e-10;
constexpr double kInfeasibleSwap = 1e-10;
constexpr double kNormDecrease = 1e-9;
// Accepted swaps between from-scratch rebuilds of the incremental state.
constexpr long kRefreshEvery = 32;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

long swap_limit(const LsConfig& cfg, Index r) {
  return cfg.max_swaps > 0 ? cfg.max_swaps : 50 * static_cast<long>(r);
}

IndexList first_pivots(const DenseMatrix& a, Index r) {
  const ColMatrix col = a;
  Eigen::ColPivHouseholderQR<ColMatrix> qr(col);
  const auto& perm = qr.colsPermutation().indices();
  IndexList out(perm.data(), perm.data() + r);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<bool> membership(const IndexList& t, Index n) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (Index c : t) in[static_cast<std::size_t>(c)] = true;
  return in;
}

void check_columns(const DenseMatrix& a, const IndexList& t) {
  std::vector<bool> seen(static_cast<std::size_t>(a.cols()), false);
  for (Index c : t) {
    if (c < 0 || c >= a.cols())
      throw DimensionError("column index " + std::to_string(c) +
                           " out of range");
    if (seen[static_cast<std::size_t>(c)])
      throw InvalidArgument("column set T repeats index " + std::to_string(c));
    seen[static_cast<std::size_t>(c)] = true;
  }
}

GInverseResult block_result(const DenseMatrix& a, const SpectralFactors& f,
                            Method method, const IndexList& t, long swaps,
                            bool converged, double zero_tol,
                            std::chrono::steady_clock::time_point t0) {
  GInverseResult res;
  res.method = method;
  res.h = column_block(a, t);
  res.columns = t;
  res.iters = swaps;
  res.converged = converged;
  finalize(f, zero_tol, res);
  res.seconds = seconds_since(t0);
  return res;
}

}  // namespace

void validate(const LsConfig& cfg) {
  if (!(cfg.epsilon >= 0.0))
    throw InvalidArgument("local search: epsilon must be >= 0");
  if (cfg.max_swaps < 0)
    throw InvalidArgument("local search: max_swaps must be >= 0");
  if (cfg.zero_tol < 0.0)
    throw InvalidArgument("local search: zero_tol must be >= 0");
}

DenseMatrix block_pinv(const DenseMatrix& a_hat) {
  const ColMatrix col = a_hat;
  Eigen::ColPivHouseholderQR<ColMatrix> qr(col);
  qr.setThreshold(kBlockRankTol);
  if (a_hat.cols() == 0 || qr.rank() < a_hat.cols())
    throw DataError("T does not index a basis");
  const ColMatrix eye = ColMatrix::Identity(a_hat.rows(), a_hat.rows());
  return qr.solve(eye);
}

DenseMatrix column_block(const DenseMatrix& a, const IndexList& t) {
  check_columns(a, t);
  const DenseMatrix pinv = block_pinv(select_columns(a, t));
  DenseMatrix h = DenseMatrix::Zero(a.cols(), a.rows());
  for (std::size_t k = 0; k < t.size(); ++k)
    h.row(t[k]) = pinv.row(static_cast<Index>(k));
  return h;
}

Basis init_basis(const DenseMatrix& a, Index r) {
  if (r < 1 || r > std::min(a.rows(), a.cols()))
    throw InvalidArgument("init_basis: rank out of range");
  Basis b;
  b.s = first_pivots(a.transpose(), r);
  b.t = first_pivots(a, r);
  const Eigen::FullPivLU<ColMatrix> lu(ColMatrix(select_block(a, b.s, b.t)));
  if (lu.rank() < r || lu.determinant() == 0.0)
    throw NumericalError("init_basis: pivot block is numerically singular");
  return b;
}

Vector cramer_coefficients(const DenseMatrix& a_tilde_inv,
                           const Vector& b_tilde) {
  if (a_tilde_inv.cols() != b_tilde.size())
    throw DimensionError("cramer_coefficients: shape mismatch");
  return a_tilde_inv * b_tilde;
}

void inverse_column_swap(DenseMatrix& inv, Index i, const Vector& beta) {
  if (i < 0 || i >= inv.rows() || beta.size() != inv.rows())
    throw DimensionError("inverse_column_swap: shape mismatch");
  if (beta[i] == 0.0)
    throw NumericalError("inverse_column_swap: singular replacement");
  inv.row(i) /= beta[i];
  for (Index k = 0; k < inv.rows(); ++k)
    if (k != i) inv.row(k) -= beta[k] * inv.row(i);
}

GInverseResult ls_det(const DenseMatrix& a, const SpectralFactors& f,
                      const LsConfig& cfg, const std::optional<Basis>& init) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const Index r = f.rank;
  Basis basis = init ? *init : init_basis(a, r);
  if (static_cast<Index>(basis.s.size()) != r ||
      static_cast<Index>(basis.t.size()) != r)
    throw InvalidArgument("ls_det: S and T must each hold rank(A) indices");
  check_columns(a, basis.t);

  DenseMatrix a_rows(r, a.cols());  // A[S, .]
  for (Index k = 0; k < r; ++k) {
    const Index row = basis.s[static_cast<std::size_t>(k)];
    if (row < 0 || row >= a.rows())
      throw DimensionError("ls_det: row index out of range");
    a_rows.row(k) = a.row(row);
  }
  auto fresh_inverse = [&](const IndexList& t) {
    const Eigen::FullPivLU<ColMatrix> lu(ColMatrix(select_columns(a_rows, t)));
    if (!lu.isInvertible())
      throw DataError("ls_det: A[S, T] is singular");
    return DenseMatrix(lu.inverse());
  };
  DenseMatrix inv = fresh_inverse(basis.t);

  const long limit = swap_limit(cfg, r);
  const double gate = 1.0 + cfg.epsilon;
  long swaps = 0;
  bool converged = false;
  DenseMatrix beta_all;
  while (true) {
    std::vector<bool> in_t = membership(basis.t, a.cols());
    beta_all.noalias() = inv * a_rows;  // r x n, column c is beta for c
    double best = gate;
    Index best_i = -1, best_c = -1;
    for (Index c = 0; c < a.cols(); ++c) {
      if (in_t[static_cast<std::size_t>(c)]) continue;
      for (Index i = 0; i < r; ++i) {
        const double mag = std::abs(beta_all(i, c));
        if (mag > best) {
          best = mag;
          best_i = i;
          best_c = c;
        }
      }
    }
    if (best_c < 0) {
      converged = true;
      break;
    }
    if (swaps >= limit) break;
    const Vector beta = beta_all.col(best_c);
    basis.t[static_cast<std::size_t>(best_i)] = best_c;
    ++swaps;
    if (swaps % kRefreshEvery == 0) {
      inv = fresh_inverse(basis.t);
    } else {
      inverse_column_swap(inv, best_i, beta);
    }
  }
  return block_result(a, f, Method::ls, basis.t, swaps, converged,
                      cfg.zero_tol, t0);
}

LocalSearchCache make_cache(const DenseMatrix& a, const IndexList& s,
                            const IndexList& t) {
  check_columns(a, t);
  LocalSearchCache c;
  c.t = t;
  c.s = s;
  const DenseMatrix a_hat = select_columns(a, t);
  c.a_hat_pinv = block_pinv(a_hat);
  c.gram.noalias() = c.a_hat_pinv * c.a_hat_pinv.transpose();
  c.row_norms = c.gram.diagonal().cwiseSqrt();
  if (s.empty()) {
    const ColMatrix g = a_hat.transpose() * a_hat;
    c.abs_det = std::sqrt(std::abs(g.determinant()));
  } else {
    if (s.size() != t.size())
      throw InvalidArgument("make_cache: S and T differ in size");
    const ColMatrix blk = select_block(a, s, t);
    c.abs_det = std::abs(blk.fullPivLu().determinant());
  }
  return c;
}

SwapEval pinv_swap_eval(const LocalSearchCache& cache, Index j,
                        const Vector& v) {
  const Index r = static_cast<Index>(cache.t.size());
  if (j < 0 || j >= r || v.size() != r)
    throw DimensionError("pinv_swap_eval: shape mismatch");
  SwapEval out;
  if (std::abs(v[j]) < kInfeasibleSwap) return out;
  out.feasible = true;
  out.v_bar = -v / v[j];
  out.v_bar[j] = 1.0 / v[j];
  const double wjj = cache.gram(j, j);
  double total = std::abs(out.v_bar[j]) * cache.row_norms[j];
  for (Index i = 0; i < r; ++i) {
    if (i == j) continue;
    const double vb = out.v_bar[i];
    const double sq = cache.gram(i, i) + 2.0 * vb * cache.gram(i, j) + vb * vb * wjj;
    total += std::sqrt(std::max(sq, 0.0));
  }
  out.new_norm21 = total;
  return out;
}

SwapEval pinv_swap_eval(const LocalSearchCache& cache, const DenseMatrix& a,
                        Index j, Index col_in) {
  if (col_in < 0 || col_in >= a.cols())
    throw DimensionError("pinv_swap_eval: column out of range");
  const Vector v = cache.a_hat_pinv * a.col(col_in);
  return pinv_swap_eval(cache, j, v);
}

void cache_commit_swap(LocalSearchCache& cache, Index j, Index col_in,
                       const Vector& v_bar) {
  const Index r = static_cast<Index>(cache.t.size());
  if (j < 0 || j >= r || v_bar.size() != r)
    throw DimensionError("cache_commit_swap: shape mismatch");
  if (v_bar[j] == 0.0)
    throw NumericalError("cache_commit_swap: singular replacement");

  DenseMatrix& w = cache.gram;
  const double wjj = w(j, j);
  const Vector wj = w.col(j);
  // i, l != j
  for (Index i = 0; i < r; ++i) {
    if (i == j) continue;
    for (Index l = 0; l < r; ++l) {
      if (l == j) continue;
      w(i, l) += v_bar[i] * v_bar[l] * wjj + wj[i] * v_bar[l] + wj[l] * v_bar[i];
    }
  }
  // i != j, l = j
  for (Index i = 0; i < r; ++i) {
    if (i == j) continue;
    w(i, j) = v_bar[j] * (wj[i] + wjj * v_bar[i]);
    w(j, i) = w(i, j);
  }
  w(j, j) = v_bar[j] * v_bar[j] * wjj;

  DenseMatrix& p = cache.a_hat_pinv;
  for (Index i = 0; i < r; ++i)
    if (i != j) p.row(i) += v_bar[i] * p.row(j);
  p.row(j) *= v_bar[j];

  cache.row_norms = w.diagonal().cwiseMax(0.0).cwiseSqrt();
  cache.abs_det /= std::abs(v_bar[j]);
  cache.t[static_cast<std::size_t>(j)] = col_in;
}

GInverseResult ls_21(const DenseMatrix& a, const SpectralFactors& f,
                     const LsConfig& cfg, const IndexList& init_t) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const Index r = f.rank;
  if (static_cast<Index>(init_t.size()) != r)
    throw InvalidArgument("ls_21: T must hold rank(A) indices");

  LocalSearchCache cache = make_cache(a, {}, init_t);
  // P = A[., T]^+ A, so column c of P is v for entering column c. It
  // follows the same row operations as the cached pseudoinverse.
  DenseMatrix p = cache.a_hat_pinv * a;
  double current = cache.row_norms.sum();

  const long limit = swap_limit(cfg, r);
  long swaps = 0;
  bool converged = false;
  bool improved = true;
  while (improved && swaps < limit) {
    improved = false;
    for (Index j = 0; j < r && swaps < limit; ++j) {
      for (Index c = 0; c < a.cols() && swaps < limit; ++c) {
        if (std::find(cache.t.begin(), cache.t.end(), c) != cache.t.end())
          continue;
        const Vector v = p.col(c);
        const SwapEval ev = pinv_swap_eval(cache, j, v);
        if (!ev.feasible || !(ev.new_norm21 < current * (1.0 - kNormDecrease)))
          continue;
        cache_commit_swap(cache, j, c, ev.v_bar);
        for (Index i = 0; i < r; ++i)
          if (i != j) p.row(i) += ev.v_bar[i] * p.row(j);
        p.row(j) *= ev.v_bar[j];
        ++swaps;
        improved = true;
        if (swaps % kRefreshEvery == 0) {
          cache = make_cache(a, {}, cache.t);
          p = cache.a_hat_pinv * a;
        }
        current = cache.row_norms.sum();
      }
    }
    if (!improved) converged = true;
  }
  return block_result(a, f, Method::ls21, cache.t, swaps, converged,
                      cfg.zero_tol, t0);
}

}  // namespace ginv
