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

// Dense primitives shared by every solver: the compact-SVD partition of A,
// assembly of ah-symmetric reflexive generalized inverses from the
// parametrization H = V1 D^-1 U1^T + V2 Z U1^T, sparsity norms and the
// Moore-Penrose property residuals.

#ifndef GINV_MATRIX_CORE_HPP_
#define GINV_MATRIX_CORE_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace ginv {

using Index = Eigen::Index;
using DenseMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<Index>;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultZeroTol = 1e-5;

// Compact-SVD partition of an m x n matrix A of rank r.
//
// u1 is m x r, v1 is n x r and v2 is n x (n - r) so that [v1 v2] is
// orthogonal. sigma holds the r nonzero singular values in nonincreasing
// order and d_inv their reciprocals. U2 is never formed.
struct SpectralFactors {
  DenseMatrix u1;
  DenseMatrix v1;
  DenseMatrix v2;
  Vector d_inv;
  Vector sigma;
  Index rank = 0;

  Index rows() const { return u1.rows(); }  // m
  Index cols() const { return v1.rows(); }  // n

  // V1 D^-1, the n x r "reduced" pseudoinverse.
  DenseMatrix v1_dinv() const;
};

struct NormReport {
  double n1 = 0.0;   // sum |h_ij|
  Index n0 = 0;      // entries with |h_ij| > zero_tol
  double n21 = 0.0;  // sum of row 2-norms
  Index n20 = 0;     // rows with 2-norm > zero_tol
  double zero_tol = kDefaultZeroTol;
};

// Frobenius norms of the four Moore-Penrose defects plus the linearized
// reflexivity defect ||H A A^+ - H||_F.
struct PropertyReport {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;
  double reflex_linear = 0.0;
};

// Numerical rank is the count of sigma_i > rank_tol * sigma_1.
// Throws DataError on an all-zero matrix, InvalidArgument on a bad tolerance.
SpectralFactors svd_partition(const DenseMatrix& a,
                              double rank_tol = kDefaultRankTol);

// Truncates the SVD at the given rank regardless of tolerance.
SpectralFactors svd_partition_with_rank(const DenseMatrix& a, Index rank);

// V1 D^-1 U1^T + V2 Z U1^T, an n x m matrix. z must be (n - r) x r.
DenseMatrix assemble_h(const SpectralFactors& f, const DenseMatrix& z);

// Maps the reduced n x r iterate K = V1 D^-1 + V2 Z to H = K U1^T.
DenseMatrix reduced_to_h(const SpectralFactors& f, const DenseMatrix& k);

DenseMatrix pseudoinverse(const SpectralFactors& f);

// U1 diag(sigma) V1^T.
DenseMatrix reconstruct(const SpectralFactors& f);

NormReport norms(const DenseMatrix& h, double zero_tol = kDefaultZeroTol);

// Euclidean norm of every row.
Vector row_norms(const DenseMatrix& h);

// Counts rows with 2-norm strictly above zero_tol.
Index count_nonzero_rows(const DenseMatrix& h, double zero_tol);

PropertyReport mp_residuals(const DenseMatrix& a, const DenseMatrix& h,
                            const DenseMatrix& a_pinv);

// H * B restricted to the row support of H: rows of H whose 2-norm does not
// exceed zero_tol yield zero rows of the product.
DenseMatrix multi_rhs_apply(const DenseMatrix& h, const DenseMatrix& b,
                            double zero_tol = kDefaultZeroTol);

// Column submatrix A[., cols].
DenseMatrix select_columns(const DenseMatrix& a, const IndexList& cols);

// Submatrix A[rows, cols].
DenseMatrix select_block(const DenseMatrix& a, const IndexList& rows,
                         const IndexList& cols);

}  // namespace ginv

#endif  // GINV_MATRIX_CORE_HPP_
