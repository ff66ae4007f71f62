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

#include <iomanip>
#include <ostream>
#include <sstream>

#include "ginv/cli.hpp"

namespace ginv::cli {
namespace {

std::string exact(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

BenchRow make_row(const std::string& instance, const GInverseResult& res,
                  std::optional<double> omega) {
  BenchRow row;
  row.instance = instance;
  row.method = std::string(method_name(res.method));
  row.omega = omega;
  row.n1 = res.norms.n1;
  row.n0 = res.norms.n0;
  row.n21 = res.norms.n21;
  row.n20 = res.norms.n20;
  row.seconds = res.seconds;
  row.iters = res.iters;
  row.converged = res.converged;
  return row;
}

BenchRow failed_row(const std::string& instance, Method method,
                    std::optional<double> omega) {
  BenchRow row;
  row.instance = instance;
  row.method = std::string(method_name(method));
  row.omega = omega;
  row.failed = true;
  return row;
}

std::string csv_line(const BenchRow& row, bool omit_time) {
  std::ostringstream os;
  os << row.instance << ',' << row.method << ',';
  if (row.omega) os << exact(*row.omega);
  os << ',';
  if (!row.failed) {
    os << exact(row.n1) << ',' << row.n0 << ',' << exact(row.n21) << ','
       << row.n20 << ',';
    if (!omit_time) os << exact(row.seconds);
    os << ',' << row.iters << ',';
  } else {
    os << ",,,,,,";
  }
  os << (row.converged ? "true" : "false");
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows,
               bool omit_time) {
  out << kCsvHeader << '\n';
  for (const BenchRow& row : rows) out << csv_line(row, omit_time) << '\n';
}

void print_row(std::ostream& out, const BenchRow& row) {
  const auto flags = out.flags();
  const auto prec = out.precision();
  out << std::setprecision(6);
  out << "instance   " << row.instance << '\n';
  out << "method     " << row.method << '\n';
  if (row.omega) out << "omega      " << *row.omega << '\n';
  out << "norm1      " << row.n1 << '\n';
  out << "norm0      " << row.n0 << '\n';
  out << "norm21     " << row.n21 << '\n';
  out << "norm20     " << row.n20 << '\n';
  out << "time_sec   " << row.seconds << '\n';
  out << "iters      " << row.iters << '\n';
  out << "converged  " << (row.converged ? "true" : "false") << '\n';
  out.flags(flags);
  out.precision(prec);
}

}  // namespace ginv::cli
