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

#include "ginv/exact_low_rank.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "ginv/errors.hpp"
#include "ginv/local_search.hpp"

namespace ginv {
namespace {

using ColMatrix = Eigen::MatrixXd;

constexpr double kConditionTol = 1e-8;
constexpr double kPairRankTol = 1e-12;

SpectralFactors factors_of_rank(const DenseMatrix& a, Index want,
                                const char* who) {
  const SpectralFactors f = svd_partition(a);
  if (f.rank != want) {
    throw DataError(std::string(who) + ": expected rank " +
                    std::to_string(want) + ", got " + std::to_string(f.rank));
  }
  return f;
}

// Rows S of an independent set for the columns T (pivoted QR of A[., T]^T).
IndexList rows_for(const DenseMatrix& a, const IndexList& t) {
  const ColMatrix blk_t = select_columns(a, t).transpose();
  Eigen::ColPivHouseholderQR<ColMatrix> qr(blk_t);
  const auto& perm = qr.colsPermutation().indices();
  IndexList s(perm.data(), perm.data() + static_cast<Index>(t.size()));
  std::sort(s.begin(), s.end());
  return s;
}

ExactResult certified(const DenseMatrix& a, const SpectralFactors& f,
                      Method method, const IndexList& s, const IndexList& t,
                      const DenseMatrix& e, double zero_tol,
                      std::chrono::steady_clock::time_point t0) {
  ExactResult out;
  out.result.method = method;
  out.result.h = column_block(a, t);
  out.result.columns = t;
  out.result.converged = true;
  finalize(f, zero_tol, out.result);
  out.w = certificate_W(a, s, t, e);
  out.certificate = verify_certificate(a, out.result.h, out.w);
  out.result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace

DenseMatrix certificate_E(const DenseMatrix& a_hat) {
  const DenseMatrix pinv = block_pinv(a_hat);  // throws on rank deficiency
  const ColMatrix gram_inv = pinv * pinv.transpose();  // (A^T A)^-1
  const Vector row_norms = gram_inv.diagonal().cwiseSqrt();
  DenseMatrix e = row_norms.cwiseInverse().asDiagonal() * gram_inv;
  return e;
}

DenseMatrix rank2_certificate_E(const DenseMatrix& a_hat) {
  if (a_hat.cols() != 2)
    throw DimensionError("rank2_certificate_E: expected two columns");
  const Vector a1 = a_hat.col(0);
  const Vector a2 = a_hat.col(1);
  const double n1 = a1.squaredNorm();
  const double n2 = a2.squaredNorm();
  const double cross = a1.dot(a2);
  const double det = n1 * n2 - cross * cross;
  if (!(det > kPairRankTol * n1 * n2))
    throw DataError("T does not index a basis");
  const double p1 = std::sqrt(n2 / det);  // ||A^+[0, .]||
  const double p2 = std::sqrt(n1 / det);  // ||A^+[1, .]||
  const double alpha1 = p1 / n2;
  const double alpha2 = p2 / n1;
  DenseMatrix e(2, 2);
  e << p1, -alpha1 * cross, -alpha2 * cross, p2;
  return e;
}

DenseMatrix certificate_W(const DenseMatrix& a, const IndexList& s,
                          const IndexList& t, const DenseMatrix& e) {
  const auto r = static_cast<Index>(t.size());
  if (static_cast<Index>(s.size()) != r || e.rows() != r || e.cols() != r)
    throw DimensionError("certificate_W: S, T and E sizes differ");
  const ColMatrix blk = select_block(a, s, t);
  const Eigen::FullPivLU<ColMatrix> lu(blk);
  if (!lu.isInvertible()) throw DataError("certificate_W: A[S, T] is singular");
  // A~^-T E = (E^T A~^-1)^T, solved without forming the inverse.
  const ColMatrix w_hat = lu.transpose().solve(ColMatrix(e));
  DenseMatrix w = DenseMatrix::Zero(a.rows(), a.cols());
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < r; ++k)
      w(s[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(k)]) =
          w_hat(i, k);
  return w;
}

CertificateReport verify_certificate(const DenseMatrix& a,
                                     const DenseMatrix& h,
                                     const DenseMatrix& w) {
  if (w.rows() != a.rows() || w.cols() != a.cols())
    throw DimensionError("verify_certificate: W must have the shape of A");
  if (h.rows() != a.cols() || h.cols() != a.rows())
    throw DimensionError("verify_certificate: H must be n x m");
  CertificateReport rep;
  rep.dual_objective = a.cwiseProduct(w).sum();
  const DenseMatrix awa = a.transpose() * w * a.transpose();  // n x m
  rep.max_row_norm = awa.rowwise().norm().maxCoeff();
  rep.primal_21 = h.rowwise().norm().sum();
  rep.gap = rep.primal_21 - rep.dual_objective;
  rep.feasible = rep.max_row_norm <= 1.0 + kDualFeasTol;
  return rep;
}

ExactResult rank1_optimal(const DenseMatrix& a, double zero_tol) {
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralFactors f = factors_of_rank(a, 1, "rank1");
  Index s = 0;
  while (s < a.rows() && a.row(s).cwiseAbs().maxCoeff() == 0.0) ++s;
  Index t = 0;
  a.row(s).cwiseAbs().maxCoeff(&t);  // first maximum on ties
  const IndexList ss{s}, tt{t};
  const DenseMatrix e = certificate_E(select_columns(a, tt));
  ExactResult out = certified(a, f, Method::rank1, ss, tt, e, zero_tol, t0);
  out.row = s;
  return out;
}

std::variant<ExactResult, ConditionFailed> rank2_candidate(
    const DenseMatrix& a, double zero_tol) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.cols() > kRank2MaxCols)
    throw InvalidArgument("rank2: more than " + std::to_string(kRank2MaxCols) +
                          " columns");
  const SpectralFactors f = factors_of_rank(a, 2, "rank2");
  const Vector sq = a.colwise().squaredNorm();
  const ColMatrix g_all = a.transpose() * a;

  double best = std::numeric_limits<double>::infinity();
  Index b1 = -1, b2 = -1;
  for (Index j1 = 0; j1 < a.cols(); ++j1) {
    for (Index j2 = j1 + 1; j2 < a.cols(); ++j2) {
      const double det = sq[j1] * sq[j2] - g_all(j1, j2) * g_all(j1, j2);
      if (!(det > kPairRankTol * sq[j1] * sq[j2])) continue;
      // ||A^+[k, .]||^2 = ||a_sigma(k)||^2 / det(G).
      const double val = (std::sqrt(sq[j2]) + std::sqrt(sq[j1])) / std::sqrt(det);
      if (val < best) {
        best = val;
        b1 = j1;
        b2 = j2;
      }
    }
  }
  if (b1 < 0) throw NumericalError("rank2: no column pair of rank two");

  const IndexList t{b1, b2};
  Eigen::Matrix2d g;
  g << sq[b1], g_all(b1, b2), g_all(b1, b2), sq[b2];
  const Eigen::Matrix2d g_inv = g.inverse();
  for (Index c = 0; c < a.cols(); ++c) {
    if (c == b1 || c == b2) continue;
    const Eigen::Vector2d rhs(g_all(b1, c), g_all(b2, c));
    const Eigen::Vector2d beta = g_inv * rhs;
    if (std::abs(beta[0]) + std::abs(beta[1]) > 1.0 + kConditionTol) {
      ConditionFailed fail;
      fail.witness_column = c;
      fail.beta = {beta[0], beta[1]};
      fail.pair = {b1, b2};
      fail.pair_norm21 = best;
      return fail;
    }
  }
  const DenseMatrix e = rank2_certificate_E(select_columns(a, t));
  return certified(a, f, Method::rank2, rows_for(a, t), t, e, zero_tol, t0);
}

}  // namespace ginv
