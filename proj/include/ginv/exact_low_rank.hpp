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

// Exact 2,1-optimal inverses for rank 1 and (conditionally) rank 2, and dual
// certificates for
//
//   max tr(A^T W)  s.t.  ||(A^T W A^T)[i, .]||_2 <= 1 for every row i,
//
// whose objective lower-bounds ||H||_{2,1} for every ah-symmetric reflexive
// generalized inverse H.

#ifndef GINV_EXACT_LOW_RANK_HPP_
#define GINV_EXACT_LOW_RANK_HPP_

#include <array>
#include <variant>

#include "ginv/admm.hpp"
#include "ginv/matrix_core.hpp"

namespace ginv {

inline constexpr double kDualFeasTol = 1e-8;

struct CertificateReport {
  double dual_objective = 0.0;  // tr(A^T W)
  double max_row_norm = 0.0;    // max_i ||(A^T W A^T)[i, .]||
  double primal_21 = 0.0;       // ||H||_{2,1}
  double gap = 0.0;             // primal_21 - dual_objective
  bool feasible = false;        // max_row_norm <= 1 + kDualFeasTol
};

// r x r matrix E with ||E[i, .] A_hat^T|| = 1 and E_ii = ||A_hat^+[i, .]||,
// built as diag(1 / ||A_hat^+[i, .]||) (A_hat^T A_hat)^-1. Throws DataError
// when A_hat lacks full column rank.
DenseMatrix certificate_E(const DenseMatrix& a_hat);

// The closed-form E of an m x 2 block, whose off-diagonal terms are
// -alpha_k a1^T a2 with alpha_1 = ||A^+_1|| / ||a2||^2 and
// alpha_2 = ||A^+_2|| / ||a1||^2. Agrees with certificate_E.
DenseMatrix rank2_certificate_E(const DenseMatrix& a_hat);

// W with block A[S, T]^-T E on rows S, columns T and zeros elsewhere, so
// that A[., T]^T W A^T = E A[., T]^T and tr(A^T W) = tr(E).
DenseMatrix certificate_W(const DenseMatrix& a, const IndexList& s,
                          const IndexList& t, const DenseMatrix& e);

CertificateReport verify_certificate(const DenseMatrix& a,
                                     const DenseMatrix& h,
                                     const DenseMatrix& w);

struct ExactResult {
  GInverseResult result;
  DenseMatrix w;
  CertificateReport certificate;
  Index row = 0;  // s of the rank-1 construction
};

// Throws DataError unless rank(A) == 1 (tolerance kDefaultRankTol).
ExactResult rank1_optimal(const DenseMatrix& a,
                          double zero_tol = kDefaultZeroTol);

struct ConditionFailed {
  Index witness_column = 0;
  std::array<double, 2> beta{};
  std::array<Index, 2> pair{};  // best pair, ascending
  double pair_norm21 = 0.0;
};

inline constexpr Index kRank2MaxCols = 2000;

// Best column pair by ||A[., T]^+||_{2,1}; succeeds when every column
// b = beta1 a_j1 + beta2 a_j2 has |beta1| + |beta2| <= 1 + 1e-8. Throws
// DataError unless rank(A) == 2 and InvalidArgument past kRank2MaxCols.
std::variant<ExactResult, ConditionFailed> rank2_candidate(
    const DenseMatrix& a, double zero_tol = kDefaultZeroTol);

}  // namespace ginv

#endif  // GINV_EXACT_LOW_RANK_HPP_
