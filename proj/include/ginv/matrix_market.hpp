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

// Matrix Market exchange format, real general matrices only.
//
// Readers accept "coordinate real general" and "array real general".
// Writers emit the dense "array real general" layout (column-major values,
// 17 significant digits) so that read(write(A)) == A exactly.

#ifndef GINV_MATRIX_MARKET_HPP_
#define GINV_MATRIX_MARKET_HPP_

#include <iosfwd>
#include <string>

#include "ginv/matrix_core.hpp"

namespace ginv {

// Throws ParseError (with a 1-based line number) on malformed input.
DenseMatrix read_matrix_market(std::istream& in);
DenseMatrix read_matrix(const std::string& path);

void write_matrix_market(std::ostream& out, const DenseMatrix& m);
void write_matrix(const std::string& path, const DenseMatrix& m);

}  // namespace ginv

#endif  // GINV_MATRIX_MARKET_HPP_
