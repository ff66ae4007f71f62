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

#ifndef GINV_ERRORS_HPP_
#define GINV_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ginv {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A configuration, instance spec or method choice is not admissible.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data violates a structural requirement (rank, basis, zero matrix).
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical post-condition could not be established.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed matrix file. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ginv

#endif  // GINV_ERRORS_HPP_
