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

#include "ginv/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ginv/errors.hpp"

namespace ginv {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

// Reads the next line that is neither a comment nor blank.
bool next_data_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    return true;
  }
  return false;
}

long long parse_int(const std::string& tok, std::size_t lineno) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", lineno);
  return v;
}

double parse_real(const std::string& tok, std::size_t lineno) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    throw ParseError("expected a real number, got '" + tok + "'", lineno);
  if (!std::isfinite(v))
    throw ParseError("non-finite value '" + tok + "'", lineno);
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

DenseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 0);
  ++lineno;
  const std::vector<std::string> head = split(line);
  if (head.size() != 5 || lower(head[0]) != "%%matrixmarket" ||
      lower(head[1]) != "matrix") {
    throw ParseError("malformed header, expected '%%MatrixMarket matrix ...'",
                     lineno);
  }
  const std::string format = lower(head[2]);
  const std::string field = lower(head[3]);
  const std::string symmetry = lower(head[4]);
  if (format != "coordinate" && format != "array")
    throw ParseError("unsupported format '" + head[2] + "'", lineno);
  if (field != "real")
    throw ParseError("unsupported field '" + head[3] + "', need real", lineno);
  if (symmetry != "general")
    throw ParseError("unsupported symmetry '" + head[4] + "'", lineno);

  if (!next_data_line(in, line, lineno))
    throw ParseError("missing size line", lineno);
  const std::vector<std::string> size = split(line);
  const bool coordinate = format == "coordinate";
  if (size.size() != (coordinate ? 3u : 2u))
    throw ParseError("malformed size line", lineno);
  const long long rows = parse_int(size[0], lineno);
  const long long cols = parse_int(size[1], lineno);
  if (rows < 1 || cols < 1)
    throw ParseError("matrix dimensions must be positive", lineno);

  DenseMatrix out = DenseMatrix::Zero(rows, cols);
  if (coordinate) {
    const long long nnz = parse_int(size[2], lineno);
    if (nnz < 0 || nnz > rows * cols)
      throw ParseError("entry count out of range", lineno);
    std::vector<bool> seen(static_cast<std::size_t>(rows * cols), false);
    for (long long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line, lineno))
        throw ParseError("fewer entries than declared", lineno);
      const std::vector<std::string> tok = split(line);
      if (tok.size() != 3) throw ParseError("expected 'i j value'", lineno);
      const long long i = parse_int(tok[0], lineno);
      const long long j = parse_int(tok[1], lineno);
      if (i < 1 || i > rows || j < 1 || j > cols)
        throw ParseError("index out of bounds (indices are 1-based)", lineno);
      const std::size_t slot = static_cast<std::size_t>((i - 1) * cols + j - 1);
      if (seen[slot]) throw ParseError("duplicate coordinate", lineno);
      seen[slot] = true;
      out(i - 1, j - 1) = parse_real(tok[2], lineno);
    }
  } else {
    // Column-major value stream, one or more values per line.
    long long k = 0;
    const long long total = rows * cols;
    while (k < total) {
      if (!next_data_line(in, line, lineno))
        throw ParseError("fewer values than rows * cols", lineno);
      for (const std::string& tok : split(line)) {
        if (k >= total) throw ParseError("more values than rows * cols", lineno);
        out(k % rows, k / rows) = parse_real(tok, lineno);
        ++k;
      }
    }
  }
  if (next_data_line(in, line, lineno))
    throw ParseError("trailing data after last entry", lineno);
  return out;
}

DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const DenseMatrix& m) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  std::ostringstream buf;
  buf << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) buf << m(i, j) << '\n';
  out << buf.str();
}

void write_matrix(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'", 0);
  write_matrix_market(out, m);
  if (!out) throw ParseError("write failed for '" + path + "'", 0);
}

}  // namespace ginv
