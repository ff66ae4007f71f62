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

#ifndef GINV_INSTANCES_HPP_
#define GINV_INSTANCES_HPP_

#include <cstdint>

#include "ginv/matrix_core.hpp"

namespace ginv {

// Random rank-r test matrix. The standard experiment scheme uses n = m/2 and
// r = m/4, but any r <= min(m, n) is accepted.
struct InstanceSpec {
  Index m = 100;
  Index n = 50;
  Index r = 25;
  double density = 0.3;
  std::uint64_t seed = 1;

  // Shape of the standard scheme for a given row count.
  static InstanceSpec standard(Index m, std::uint64_t seed);
};

// Throws InvalidArgument when the spec is not admissible.
void validate(const InstanceSpec& spec);

// A = L R with sparse uniform(-1, 1) factors L (m x r) and R (r x n).
// Deterministic in spec.seed; the result has numerical rank exactly r.
DenseMatrix gen_rank_r(const InstanceSpec& spec);

// Family on which the determinant local search is off by a factor of r.
struct WorstCaseSpec {
  Index r = 3;
  double delta = 1e-4;
  Index embed_m = 0;  // 0 means r + 1
  Index embed_n = 0;  // 0 means r + 2
};

struct WorstCaseInstance {
  DenseMatrix toeplitz;  // r x r, the inverse of a_tilde
  DenseMatrix a_tilde;   // r x r
  DenseMatrix a_full;    // [[a_tilde, a_tilde * 1, 0], [0, 0, 0]]
  Index b_column = 0;    // column of a_full holding a_tilde * 1
  bool delta_is_large = false;  // delta >= 0.5; the bound is loose there
};

// Lower-triangular Toeplitz pattern: entry (i, j) is 1 + (i - j) * delta
// below the diagonal and 1 elsewhere.
DenseMatrix worst_case_toeplitz(Index r, double delta);

// Throws InvalidArgument for r < 2, delta <= 0 or a too-small embedding, and
// NumericalError when det(toeplitz) misses (-delta)^(r-1) by more than 1e-8
// relative.
WorstCaseInstance worst_case_build(const WorstCaseSpec& spec);

}  // namespace ginv

#endif  // GINV_INSTANCES_HPP_
