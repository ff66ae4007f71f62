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

// Per-iteration hot loops of the ADMM solvers.
//
// Two implementations with identical signatures:
//   serial::  plain loops, kept as the reference the tests compare against;
//   omp::     OpenMP over fixed-size row chunks.
//
// The omp kernels partition work into chunks of kRowChunk rows independent
// of the thread count, and every output entry is produced by exactly one
// chunk, so results are bitwise identical for any `threads` value.

#ifndef GINV_KERNELS_HPP_
#define GINV_KERNELS_HPP_

#include "ginv/matrix_core.hpp"

namespace ginv::kernels {

inline constexpr Index kRowChunk = 32;

// Largest thread count the omp kernels will use, from GINV_THREADS
// (default 1). Values < 1 are treated as 1.
int threads_from_env();

// Row order of `norms` by decreasing value; equal norms keep index order.
IndexList rows_by_decreasing_norm(const Vector& norms);

namespace serial {

void multiply(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);
void multiply_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);
void multiply_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c);

void row_norms(const DenseMatrix& y, Vector& out);
void soft_threshold(const DenseMatrix& y, double kappa, DenseMatrix& e);
void row_shrink(const DenseMatrix& y, double rho, DenseMatrix& e);
void project_row_support(const DenseMatrix& y, Index gamma, DenseMatrix& e);
void row_shrink_capped(const DenseMatrix& y, double rho, Index gamma,
                       DenseMatrix& e);

}  // namespace serial

namespace omp {

void multiply(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
              int threads);
void multiply_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                 int threads);
void multiply_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& c,
                 int threads);

void row_norms(const DenseMatrix& y, Vector& out, int threads);
void soft_threshold(const DenseMatrix& y, double kappa, DenseMatrix& e,
                    int threads);
void row_shrink(const DenseMatrix& y, double rho, DenseMatrix& e, int threads);
void project_row_support(const DenseMatrix& y, Index gamma, DenseMatrix& e,
                         int threads);
void row_shrink_capped(const DenseMatrix& y, double rho, Index gamma,
                       DenseMatrix& e, int threads);

}  // namespace omp

}  // namespace ginv::kernels

#endif  // GINV_KERNELS_HPP_
