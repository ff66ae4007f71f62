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

#include "ginv/matrix_core.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "ginv/errors.hpp"

namespace ginv {
namespace {

using ColMatrix = Eigen::MatrixXd;

struct FullSvd {
  ColMatrix u;  // m x min(m,n)
  ColMatrix v;  // n x n
  Vector sigma;
};

FullSvd compute_svd(const DenseMatrix& a) {
  if (a.size() == 0) throw DimensionError("svd_partition: empty matrix");
  if (!a.allFinite()) throw DataError("svd_partition: non-finite entry");
  const ColMatrix col = a;
  Eigen::BDCSVD<ColMatrix> svd(col, Eigen::ComputeThinU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

SpectralFactors partition(const FullSvd& s, Index r) {
  SpectralFactors f;
  const Index n = s.v.rows();
  f.rank = r;
  f.u1 = s.u.leftCols(r);
  f.v1 = s.v.leftCols(r);
  f.v2 = s.v.rightCols(n - r);
  f.sigma = s.sigma.head(r);
  f.d_inv = f.sigma.cwiseInverse();
  return f;
}

}  // namespace

DenseMatrix SpectralFactors::v1_dinv() const {
  return v1 * d_inv.asDiagonal();
}

SpectralFactors svd_partition(const DenseMatrix& a, double rank_tol) {
  if (!(rank_tol > 0.0 && rank_tol < 1.0))
    throw InvalidArgument("svd_partition: rank_tol must lie in (0, 1)");
  const FullSvd s = compute_svd(a);
  if (s.sigma.size() == 0 || s.sigma[0] == 0.0) {
    throw DataError(
        "zero matrix has no generalized-inverse parametrization of this form");
  }
  const double cut = rank_tol * s.sigma[0];
  Index r = 0;
  while (r < s.sigma.size() && s.sigma[r] > cut) ++r;
  return partition(s, r);
}

SpectralFactors svd_partition_with_rank(const DenseMatrix& a, Index rank) {
  const Index limit = std::min(a.rows(), a.cols());
  if (rank < 1 || rank > limit) {
    throw InvalidArgument("svd_partition: rank " + std::to_string(rank) +
                          " outside [1, " + std::to_string(limit) + "]");
  }
  const FullSvd s = compute_svd(a);
  if (s.sigma[0] == 0.0) {
    throw DataError(
        "zero matrix has no generalized-inverse parametrization of this form");
  }
  if (!(s.sigma[rank - 1] > 1e-14 * s.sigma[0])) {
    throw DataError("svd_partition: requested rank exceeds numerical rank");
  }
  return partition(s, rank);
}

DenseMatrix reduced_to_h(const SpectralFactors& f, const DenseMatrix& k) {
  if (k.rows() != f.cols() || k.cols() != f.rank)
    throw DimensionError("reduced_to_h: expected an n x r matrix");
  return k * f.u1.transpose();
}

DenseMatrix assemble_h(const SpectralFactors& f, const DenseMatrix& z) {
  if (z.rows() != f.v2.cols() || z.cols() != f.rank) {
    throw DimensionError("assemble_h: z must be (n - r) x r, got " +
                         std::to_string(z.rows()) + " x " +
                         std::to_string(z.cols()));
  }
  DenseMatrix k = f.v1_dinv();
  if (z.size() > 0) k.noalias() += f.v2 * z;
  return reduced_to_h(f, k);
}

DenseMatrix pseudoinverse(const SpectralFactors& f) {
  return reduced_to_h(f, f.v1_dinv());
}

DenseMatrix reconstruct(const SpectralFactors& f) {
  return f.u1 * f.sigma.asDiagonal() * f.v1.transpose();
}

Vector row_norms(const DenseMatrix& h) { return h.rowwise().norm(); }

Index count_nonzero_rows(const DenseMatrix& h, double zero_tol) {
  Index count = 0;
  for (Index i = 0; i < h.rows(); ++i)
    if (h.row(i).norm() > zero_tol) ++count;
  return count;
}

NormReport norms(const DenseMatrix& h, double zero_tol) {
  if (zero_tol < 0.0) throw InvalidArgument("norms: zero_tol must be >= 0");
  NormReport rep;
  rep.zero_tol = zero_tol;
  for (Index i = 0; i < h.rows(); ++i) {
    const double rn = h.row(i).norm();
    rep.n21 += rn;
    if (rn > zero_tol) ++rep.n20;
    for (Index j = 0; j < h.cols(); ++j) {
      const double v = std::abs(h(i, j));
      rep.n1 += v;
      if (v > zero_tol) ++rep.n0;
    }
  }
  return rep;
}

PropertyReport mp_residuals(const DenseMatrix& a, const DenseMatrix& h,
                            const DenseMatrix& a_pinv) {
  if (h.rows() != a.cols() || h.cols() != a.rows())
    throw DimensionError("mp_residuals: h must be n x m for an m x n matrix");
  if (a_pinv.rows() != a.cols() || a_pinv.cols() != a.rows())
    throw DimensionError("mp_residuals: a_pinv must be n x m");
  const DenseMatrix ah = a * h;  // m x m
  const DenseMatrix ha = h * a;  // n x n
  PropertyReport rep;
  rep.p1 = (ah * a - a).norm();
  rep.p2 = (ha * h - h).norm();
  rep.p3 = (ah - ah.transpose()).norm();
  rep.p4 = (ha - ha.transpose()).norm();
  rep.reflex_linear = (ha * a_pinv - h).norm();
  return rep;
}

DenseMatrix multi_rhs_apply(const DenseMatrix& h, const DenseMatrix& b,
                            double zero_tol) {
  if (h.cols() != b.rows())
    throw DimensionError("multi_rhs_apply: h columns must match b rows");
  DenseMatrix out = DenseMatrix::Zero(h.rows(), b.cols());
  for (Index i = 0; i < h.rows(); ++i) {
    if (h.row(i).norm() > zero_tol) out.row(i).noalias() = h.row(i) * b;
  }
  return out;
}

DenseMatrix select_columns(const DenseMatrix& a, const IndexList& cols) {
  DenseMatrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] < 0 || cols[k] >= a.cols())
      throw DimensionError("select_columns: column index out of range");
    out.col(static_cast<Index>(k)) = a.col(cols[k]);
  }
  return out;
}

DenseMatrix select_block(const DenseMatrix& a, const IndexList& rows,
                         const IndexList& cols) {
  DenseMatrix out(static_cast<Index>(rows.size()),
                  static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= a.rows())
      throw DimensionError("select_block: row index out of range");
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] < 0 || cols[k] >= a.cols())
        throw DimensionError("select_block: column index out of range");
      out(static_cast<Index>(i), static_cast<Index>(k)) = a(rows[i], cols[k]);
    }
  }
  return out;
}

}  // namespace ginv
