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

// Column-block generalized inverses and the two local searches over column
// sets T: one maximizing |det A[S,T]|, one minimizing ||A[.,T]^+||_{2,1}.
//
// A column block is the n x m matrix that is zero outside the rows T and
// holds the pseudoinverse of A[., T] there. For rank(A[., T]) = rank(A) it
// is an ah-symmetric reflexive generalized inverse with exactly r nonzero
// rows.

#ifndef GINV_LOCAL_SEARCH_HPP_
#define GINV_LOCAL_SEARCH_HPP_

#include <optional>

#include "ginv/admm.hpp"
#include "ginv/matrix_core.hpp"

namespace ginv {

struct LsConfig {
  enum class Criterion { determinant, norm21 };

  // A determinant swap is taken only if it grows |det| by more than 1+eps.
  double epsilon = 1e-2;
  Criterion criterion = Criterion::determinant;
  // 0 means 50 * r.
  long max_swaps = 0;
  double zero_tol = kDefaultZeroTol;
};

void validate(const LsConfig& cfg);

// Row set S and column set T of an r x r nonsingular submatrix.
struct Basis {
  IndexList s;
  IndexList t;
};

// State of the 2,1 search for the block A[., T].
struct LocalSearchCache {
  IndexList t;
  IndexList s;
  DenseMatrix a_hat_pinv;  // r x m, rows of A[., T]^+
  Vector row_norms;        // ||a_hat_pinv[i, .]||
  DenseMatrix gram;        // a_hat_pinv * a_hat_pinv^T
  double abs_det = 0.0;    // |det A[S, T]|
};

// The n x m column-block inverse over T. Throws DataError
// "T does not index a basis" when A[., T] lacks full column rank.
DenseMatrix column_block(const DenseMatrix& a, const IndexList& t);

// Pseudoinverse of a full-column-rank m x r matrix, r x m.
DenseMatrix block_pinv(const DenseMatrix& a_hat);

// First r pivots of column-pivoted QR of A^T (rows S) and of A (columns T),
// each returned in ascending order. Throws NumericalError if A[S, T] is
// numerically singular.
Basis init_basis(const DenseMatrix& a, Index r);

// Cramer coefficients beta = A~^-1 b~, so |beta_i| is the factor by which
// |det A~| changes when column i is replaced by b~.
Vector cramer_coefficients(const DenseMatrix& a_tilde_inv,
                           const Vector& b_tilde);

// Turns inv = A~^-1 into the inverse of A~ with column i replaced by the
// column whose Cramer coefficients are beta. Requires beta[i] != 0.
void inverse_column_swap(DenseMatrix& inv, Index i, const Vector& beta);

// Determinant local search with S fixed. `init` defaults to init_basis.
// result.columns holds the final T and result.iters the accepted swaps.
GInverseResult ls_det(const DenseMatrix& a, const SpectralFactors& f,
                      const LsConfig& cfg,
                      const std::optional<Basis>& init = std::nullopt);

// Builds the cache from scratch. s may be empty (abs_det is then the
// volume sqrt(det(A[., T]^T A[., T])), which scales the same way).
LocalSearchCache make_cache(const DenseMatrix& a, const IndexList& s,
                            const IndexList& t);

struct SwapEval {
  bool feasible = false;   // false when |v_j| < 1e-10
  double new_norm21 = 0.0;
  Vector v_bar;
};

// Predicts ||.||_{2,1} of the pseudoinverse after column col_in replaces
// position j of T, in O(r) given v = A[., T]^+ * a[., col_in].
SwapEval pinv_swap_eval(const LocalSearchCache& cache, Index j,
                        const Vector& v);
SwapEval pinv_swap_eval(const LocalSearchCache& cache, const DenseMatrix& a,
                        Index j, Index col_in);

// Applies an accepted swap to the rows, Gram matrix, norms and determinant.
void cache_commit_swap(LocalSearchCache& cache, Index j, Index col_in,
                       const Vector& v_bar);

// First-improvement 2,1 search started at init_t (usually ls_det's T).
GInverseResult ls_21(const DenseMatrix& a, const SpectralFactors& f,
                     const LsConfig& cfg, const IndexList& init_t);

}  // namespace ginv

#endif  // GINV_LOCAL_SEARCH_HPP_
