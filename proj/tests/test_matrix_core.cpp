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

#include <doctest.h>

#include <cmath>
#include <random>

#include "ginv/errors.hpp"
#include "ginv/matrix_core.hpp"
#include "oracles.hpp"

using namespace ginv;

namespace {

DenseMatrix mat(Index r, Index c, std::initializer_list<double> v) {
  DenseMatrix m(r, c);
  auto it = v.begin();
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

const DenseMatrix kPath = mat(2, 3, {1, 1, 0, 0, 1, 1});

}  // namespace

TEST_CASE("svd_partition identity and diagonal") {
  const SpectralFactors f = svd_partition(DenseMatrix::Identity(2, 2));
  CHECK(f.rank == 2);
  CHECK(f.d_inv[0] == doctest::Approx(1.0));
  CHECK(f.d_inv[1] == doctest::Approx(1.0));
  CHECK(f.v2.cols() == 0);

  const SpectralFactors g = svd_partition(mat(2, 2, {3, 0, 0, 0}));
  CHECK(g.rank == 1);
  CHECK(g.d_inv[0] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("svd_partition of the path matrix has sigma sqrt3 and 1") {
  const SpectralFactors f = svd_partition(kPath);
  REQUIRE(f.rank == 2);
  CHECK(f.sigma[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(f.sigma[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.v2.rows() == 3);
  CHECK(f.v2.cols() == 1);
}

TEST_CASE("svd_partition factor invariants on random input") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = oracle::random_rank(12, 8, 3 + trial % 4, rng);
    const SpectralFactors f = svd_partition(a);
    CHECK(f.rank == 3 + trial % 4);
    const Index r = f.rank;
    CHECK((f.u1.transpose() * f.u1 - DenseMatrix::Identity(r, r)).norm() < 1e-10);
    CHECK((f.v1.transpose() * f.v1 - DenseMatrix::Identity(r, r)).norm() < 1e-10);
    CHECK((f.v2.transpose() * f.v2 -
           DenseMatrix::Identity(f.v2.cols(), f.v2.cols()))
              .norm() < 1e-10);
    CHECK((f.v1.transpose() * f.v2).norm() < 1e-10);
    CHECK((reconstruct(f) - a).norm() <= 1e-8 * a.norm());
    for (Index i = 0; i < r; ++i) {
      CHECK(f.d_inv[i] * f.sigma[i] == doctest::Approx(1.0));
      if (i > 0) CHECK(f.sigma[i] <= f.sigma[i - 1]);
    }
    // Reconstructing and partitioning again is stable.
    const SpectralFactors g = svd_partition(reconstruct(f));
    CHECK(g.rank == f.rank);
    CHECK((reconstruct(g) - reconstruct(f)).norm() <= 1e-8 * a.norm());
  }
}

TEST_CASE("svd_partition errors") {
  CHECK_THROWS_WITH_AS(
      svd_partition(DenseMatrix::Zero(3, 2)),
      "zero matrix has no generalized-inverse parametrization of this form",
      DataError);
  CHECK_THROWS_AS(svd_partition(kPath, 0.0), InvalidArgument);
  CHECK_THROWS_AS(svd_partition(kPath, 1.0), InvalidArgument);
  DenseMatrix bad = kPath;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(svd_partition(bad), DataError);
}

TEST_CASE("svd_partition_with_rank truncates") {
  std::mt19937_64 rng(3);
  DenseMatrix a = oracle::random_rank(6, 5, 2, rng);
  a += 1e-12 * oracle::random_matrix(6, 5, rng);
  CHECK(svd_partition(a, 1e-14).rank > 2);
  CHECK(svd_partition_with_rank(a, 2).rank == 2);
  CHECK_THROWS_AS(svd_partition_with_rank(a, 0), InvalidArgument);
  CHECK_THROWS_AS(svd_partition_with_rank(a, 6), InvalidArgument);
}

TEST_CASE("assemble_h with zero Z is the pseudoinverse") {
  const SpectralFactors f = svd_partition(kPath);
  const DenseMatrix h = assemble_h(f, DenseMatrix::Zero(1, 2));
  const DenseMatrix want = mat(3, 2, {2, -1, 1, 1, -1, 2}) / 3.0;
  CHECK((h - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((h - pseudoinverse(f)).cwiseAbs().maxCoeff() < 1e-12);

  const SpectralFactors id = svd_partition(DenseMatrix::Identity(2, 2));
  CHECK((assemble_h(id, DenseMatrix::Zero(0, 2)) - DenseMatrix::Identity(2, 2))
            .norm() < 1e-12);
  CHECK_THROWS_AS(assemble_h(f, DenseMatrix::Zero(2, 2)), DimensionError);
}

TEST_CASE("assemble_h satisfies P1 P2 P3 for any Z") {
  std::mt19937_64 rng(11);
  const DenseMatrix a = oracle::random_rank(9, 7, 3, rng);
  const SpectralFactors f = svd_partition(a);
  const DenseMatrix pinv = oracle::pinv_general(a);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix z = 3.0 * oracle::random_matrix(4, 3, rng);
    const PropertyReport p = mp_residuals(a, assemble_h(f, z), pinv);
    CHECK(p.p1 < 1e-10);
    CHECK(p.p2 < 1e-10);
    CHECK(p.p3 < 1e-10);
    CHECK(p.reflex_linear < 1e-10);
    CHECK(p.p4 > 1e-6);
  }
}

TEST_CASE("pseudoinverse examples") {
  CHECK(pseudoinverse(svd_partition(mat(1, 1, {2})))(0, 0) ==
        doctest::Approx(0.5));
  const DenseMatrix p = pseudoinverse(svd_partition(mat(2, 2, {1, 2, 2, 4})));
  CHECK((p - mat(2, 2, {0.04, 0.08, 0.08, 0.16})).cwiseAbs().maxCoeff() < 1e-12);
  const DenseMatrix d = pseudoinverse(svd_partition(mat(2, 2, {3, 0, 0, 0})));
  CHECK((d - mat(2, 2, {1.0 / 3.0, 0, 0, 0})).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norms examples") {
  NormReport n = norms(mat(2, 2, {3, -4, 0, 0}));
  CHECK(n.n1 == doctest::Approx(7));
  CHECK(n.n0 == 2);
  CHECK(n.n21 == doctest::Approx(5));
  CHECK(n.n20 == 1);

  n = norms(DenseMatrix::Zero(3, 3));
  CHECK(n.n1 == 0);
  CHECK(n.n0 == 0);
  CHECK(n.n21 == 0);
  CHECK(n.n20 == 0);

  n = norms(mat(2, 2, {1, 1, 1, 1}));
  CHECK(n.n1 == doctest::Approx(4));
  CHECK(n.n21 == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(n.n0 == 4);
  CHECK(n.n20 == 2);
  CHECK_THROWS_AS(norms(DenseMatrix::Zero(1, 1), -1.0), InvalidArgument);
}

TEST_CASE("norm chain holds on random matrices") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix h = oracle::random_matrix(6, 4, rng);
    const NormReport n = norms(h);
    CHECK(n.n21 <= n.n1 * (1 + 1e-10));
    CHECK(n.n1 <= std::sqrt(4.0) * n.n21 * (1 + 1e-10));
    CHECK(n.n20 <= n.n0);
  }
}

TEST_CASE("mp_residuals examples") {
  const SpectralFactors f = svd_partition(kPath);
  const DenseMatrix pinv = pseudoinverse(f);
  PropertyReport p = mp_residuals(kPath, pinv, pinv);
  CHECK(p.p1 < 1e-12);
  CHECK(p.p2 < 1e-12);
  CHECK(p.p3 < 1e-12);
  CHECK(p.p4 < 1e-12);

  const DenseMatrix id = DenseMatrix::Identity(3, 3);
  p = mp_residuals(id, id, id);
  CHECK(p.p1 == 0);
  CHECK(p.p4 == 0);

  p = mp_residuals(kPath, DenseMatrix::Zero(3, 2), pinv);
  CHECK(p.p1 == doctest::Approx(kPath.norm()));
  CHECK(p.p2 == 0);
  CHECK_THROWS_AS(mp_residuals(kPath, DenseMatrix::Zero(2, 3), pinv),
                  DimensionError);
}

TEST_CASE("multi_rhs_apply") {
  const DenseMatrix b = mat(3, 2, {1, 2, 3, 4, 5, 6});
  CHECK((multi_rhs_apply(DenseMatrix::Identity(3, 3), b) - b).norm() == 0);

  const DenseMatrix pinv = pseudoinverse(svd_partition(kPath));
  const DenseMatrix theta = multi_rhs_apply(pinv, mat(2, 1, {1, 1}));
  CHECK((theta - mat(3, 1, {1, 2, 1}) / 3.0).norm() < 1e-12);

  DenseMatrix h = DenseMatrix::Zero(3, 2);
  h.row(1) << 1, 2;
  const DenseMatrix out = multi_rhs_apply(h, mat(2, 1, {1, 1}));
  CHECK(out(0, 0) == 0);
  CHECK(out(2, 0) == 0);
  CHECK(out(1, 0) == 3);
  CHECK_THROWS_AS(multi_rhs_apply(h, b), DimensionError);
}

TEST_CASE("multi_rhs_apply solves the normal equations") {
  std::mt19937_64 rng(21);
  const DenseMatrix a = oracle::random_rank(10, 6, 3, rng);
  const SpectralFactors f = svd_partition(a);
  const DenseMatrix h = assemble_h(f, oracle::random_matrix(3, 3, rng));
  const DenseMatrix b = oracle::random_matrix(10, 4, rng);
  const DenseMatrix theta = multi_rhs_apply(h, b);
  for (Index k = 0; k < 4; ++k)
    CHECK(oracle::normal_residual(a, theta.col(k), b.col(k)) < 1e-10);
}

TEST_CASE("select_columns and select_block") {
  const DenseMatrix c = select_columns(kPath, {2, 0});
  CHECK(c == mat(2, 2, {0, 1, 1, 0}));
  CHECK(select_block(kPath, {1}, {1, 2}) == mat(1, 2, {1, 1}));
  CHECK_THROWS_AS(select_columns(kPath, {3}), DimensionError);
  CHECK_THROWS_AS(select_block(kPath, {2}, {0}), DimensionError);
}
