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
#include "ginv/exact_low_rank.hpp"
#include "ginv/local_search.hpp"
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

// ||E[i, .] A_hat^T|| = 1 and E_ii = ||A_hat^+[i, .]||.
void check_e_identities(const DenseMatrix& a_hat, const DenseMatrix& e) {
  const DenseMatrix pinv = oracle::pinv_full_column(a_hat);
  const DenseMatrix ea = e * a_hat.transpose();
  for (Index i = 0; i < e.rows(); ++i) {
    CHECK(ea.row(i).norm() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(e(i, i) == doctest::Approx(pinv.row(i).norm()).epsilon(1e-8));
  }
}

}  // namespace

TEST_CASE("certificate_E of the identity") {
  const DenseMatrix e = certificate_E(DenseMatrix::Identity(3, 3));
  CHECK((e - DenseMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("certificate_E of a padded diagonal block") {
  DenseMatrix a_hat = DenseMatrix::Zero(4, 2);
  a_hat(0, 0) = 2;
  a_hat(1, 1) = 3;
  const DenseMatrix e = certificate_E(a_hat);
  CHECK((e - mat(2, 2, {0.5, 0, 0, 1.0 / 3.0})).norm() < 1e-12);
  check_e_identities(a_hat, e);
}

TEST_CASE("certificate_E identities on random blocks") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix a_hat = oracle::random_matrix(5, 2 + trial % 3, rng);
    check_e_identities(a_hat, certificate_E(a_hat));
  }
  DenseMatrix bad(3, 2);
  bad << 1, 2, 1, 2, 1, 2;
  CHECK_THROWS_AS(certificate_E(bad), DataError);
}

TEST_CASE("rank2_certificate_E agrees with the general form") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix a_hat = oracle::random_matrix(6, 2, rng);
    CHECK((rank2_certificate_E(a_hat) - certificate_E(a_hat)).norm() <
          1e-10 * certificate_E(a_hat).norm());
  }
  CHECK_THROWS_AS(rank2_certificate_E(DenseMatrix::Identity(3, 3)),
                  DimensionError);
}

TEST_CASE("two-column pseudoinverse row norms") {
  // ||A^+[k, .]||^2 = ||a_other||^2 / det(A^T A) for an m x 2 block.
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix a_hat = oracle::random_matrix(7, 2, rng);
    const DenseMatrix pinv = oracle::pinv_full_column(a_hat);
    const double g = oracle::det(a_hat.transpose() * a_hat);
    CHECK(pinv.row(0).squaredNorm() ==
          doctest::Approx(a_hat.col(1).squaredNorm() / g).epsilon(1e-8));
    CHECK(pinv.row(1).squaredNorm() ==
          doctest::Approx(a_hat.col(0).squaredNorm() / g).epsilon(1e-8));
  }
}

TEST_CASE("certificate_W on the identity") {
  const DenseMatrix id = DenseMatrix::Identity(3, 3);
  const DenseMatrix w = certificate_W(id, {0, 1, 2}, {0, 1, 2}, certificate_E(id));
  CHECK((w - id).norm() < 1e-12);
  const CertificateReport rep = verify_certificate(id, id, w);
  CHECK(rep.dual_objective == doctest::Approx(3.0));
  CHECK(rep.feasible);
  CHECK(std::abs(rep.gap) < 1e-12);
}

TEST_CASE("certificate_W on the path matrix") {
  const IndexList s{0, 1}, t{0, 2};
  const DenseMatrix e = certificate_E(select_columns(kPath, t));
  const DenseMatrix w = certificate_W(kPath, s, t, e);
  CHECK((kPath.transpose() * w).trace() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(w.col(1).norm() == 0.0);
  // Column 1 has beta = (1, 1), so this W is not dual feasible.
  const CertificateReport rep = verify_certificate(kPath, column_block(kPath, t), w);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.max_row_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(certificate_W(kPath, {0, 1}, {0}, e), DimensionError);
}

TEST_CASE("certificate_W identities on random rank-2 matrices") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = oracle::random_rank(6, 5, 2, rng);
    const Basis b = init_basis(a, 2);
    const DenseMatrix a_hat = select_columns(a, b.t);
    const DenseMatrix e = certificate_E(a_hat);
    const DenseMatrix w = certificate_W(a, b.s, b.t, e);
    CHECK((a_hat.transpose() * w * a.transpose() - e * a_hat.transpose()).norm() <
          1e-8 * std::max(1.0, e.norm() * a_hat.norm()));
    CHECK((a.transpose() * w).trace() ==
          doctest::Approx(oracle::norm21(oracle::pinv_full_column(a_hat)))
              .epsilon(1e-8));
  }
}

TEST_CASE("verify_certificate with W = 0") {
  const DenseMatrix h = column_block(kPath, {0, 2});
  const CertificateReport rep =
      verify_certificate(kPath, h, DenseMatrix::Zero(2, 3));
  CHECK(rep.dual_objective == 0.0);
  CHECK(rep.feasible);
  CHECK(rep.gap == doctest::Approx(2.0));
  CHECK_THROWS_AS(verify_certificate(kPath, h, DenseMatrix::Zero(3, 2)),
                  DimensionError);
}

TEST_CASE("scaled determinant-search certificate is dual feasible") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix a = oracle::random_rank(15, 10, 4, rng);
    const SpectralFactors f = svd_partition(a);
    const Basis start = init_basis(a, 4);
    LsConfig cfg;
    const GInverseResult r = ls_det(a, f, cfg, start);
    const DenseMatrix a_hat = select_columns(a, r.columns);
    DenseMatrix w = certificate_W(a, start.s, r.columns, certificate_E(a_hat));
    const double scale = 1.0 / (4.0 * (1.0 + cfg.epsilon));
    w *= scale;
    const CertificateReport rep = verify_certificate(a, r.h, w);
    CHECK(rep.feasible);
    CHECK(rep.dual_objective ==
          doctest::Approx(r.norms.n21 * scale).epsilon(1e-8));
  }
}

TEST_CASE("rank1_optimal example") {
  const ExactResult ex = rank1_optimal(mat(2, 2, {1, 2, 2, 4}));
  CHECK(ex.row == 0);
  CHECK(ex.result.columns == IndexList{1});
  CHECK((ex.result.h - mat(2, 2, {0, 0, 0.1, 0.2})).norm() < 1e-12);
  CHECK(ex.result.norms.n21 == doctest::Approx(1.0 / std::sqrt(20.0)));
  CHECK(ex.certificate.feasible);
  CHECK(std::abs(ex.certificate.gap) <= 1e-8);
}

TEST_CASE("rank1_optimal small cases") {
  const ExactResult ex = rank1_optimal(mat(2, 2, {2, 0, 0, 0}));
  CHECK((ex.result.h - mat(2, 2, {0.5, 0, 0, 0})).norm() < 1e-14);

  const DenseMatrix a = mat(2, 2, {1, 2, 2, 4});
  const ExactResult big = rank1_optimal(10.0 * a);
  CHECK((10.0 * big.result.h - rank1_optimal(a).result.h).norm() < 1e-12);

  // The first row is zero; s moves to the next nonzero one.
  const ExactResult z = rank1_optimal(mat(3, 3, {0, 0, 0, 1, -3, 3, 2, -6, 6}));
  CHECK(z.row == 1);
  CHECK(z.result.columns == IndexList{1});
  CHECK(std::abs(z.certificate.gap) <= 1e-8);
}

TEST_CASE("rank1_optimal matches admm21 on random rank-1 matrices") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = oracle::random_rank(8 + trial, 5 + trial % 3, 1, rng);
    const ExactResult ex = rank1_optimal(a);
    CHECK(ex.certificate.feasible);
    CHECK(std::abs(ex.certificate.gap) <= 1e-8);
    const GInverseResult admm =
        admm21_solve(svd_partition(a), AdmmConfig::admm21_defaults());
    CHECK(admm.norms.n21 == doctest::Approx(ex.result.norms.n21).epsilon(1e-4));
  }
  CHECK_THROWS_AS(rank1_optimal(kPath), DataError);
}

TEST_CASE("rank2_candidate reports the path matrix witness") {
  const auto out = rank2_candidate(kPath);
  REQUIRE(std::holds_alternative<ConditionFailed>(out));
  const ConditionFailed& c = std::get<ConditionFailed>(out);
  CHECK(c.pair == std::array<Index, 2>{0, 2});
  CHECK(c.witness_column == 1);
  CHECK(c.beta[0] == doctest::Approx(1.0));
  CHECK(c.beta[1] == doctest::Approx(1.0));
  CHECK(c.pair_norm21 == doctest::Approx(2.0));
}

TEST_CASE("rank2_candidate succeeds when the condition holds") {
  const DenseMatrix a = mat(2, 3, {1, 0, 0.3, 0, 1, 0.3});
  const auto out = rank2_candidate(a);
  REQUIRE(std::holds_alternative<ExactResult>(out));
  const ExactResult& ex = std::get<ExactResult>(out);
  CHECK(ex.result.columns == IndexList{0, 1});
  CHECK(ex.certificate.feasible);
  CHECK(std::abs(ex.certificate.gap) <= 1e-8);
  CHECK(ex.result.norms.n21 == doctest::Approx(2.0));

  const auto two = rank2_candidate(mat(3, 2, {1, 2, 0, 1, 1, 0}));
  REQUIRE(std::holds_alternative<ExactResult>(two));
  CHECK(std::abs(std::get<ExactResult>(two).certificate.gap) <= 1e-8);

  CHECK_THROWS_AS(rank2_candidate(mat(2, 2, {1, 2, 2, 4})), DataError);
}

TEST_CASE("rank2_candidate certified solutions match admm21") {
  std::mt19937_64 rng(37);
  int certified = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const DenseMatrix a = oracle::random_rank(6, 4, 2, rng);
    const auto out = rank2_candidate(a);
    if (!std::holds_alternative<ExactResult>(out)) continue;
    ++certified;
    const ExactResult& ex = std::get<ExactResult>(out);
    CHECK(std::abs(ex.certificate.gap) <= 1e-8);
    const GInverseResult admm =
        admm21_solve(svd_partition(a), AdmmConfig::admm21_defaults());
    CHECK(admm.norms.n21 >= ex.result.norms.n21 * (1 - 1e-6));
    CHECK(admm.norms.n21 == doctest::Approx(ex.result.norms.n21).epsilon(1e-4));
  }
  CHECK(certified > 0);
}
