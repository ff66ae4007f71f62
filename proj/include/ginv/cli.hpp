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

// Command-line front end: gen, solve, check, apply, bench and worstcase.

#ifndef GINV_CLI_HPP_
#define GINV_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ginv/admm.hpp"
#include "ginv/local_search.hpp"
#include "ginv/matrix_core.hpp"

namespace ginv::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,      // bad flags or an invalid spec
  kData = 3,       // unreadable input, shape or rank mismatch
  kNumerical = 4,  // internal numerical failure
};

// One line of a results table.
struct BenchRow {
  std::string instance;
  std::string method;
  std::optional<double> omega;
  double n1 = 0.0;
  Index n0 = 0;
  double n21 = 0.0;
  Index n20 = 0;
  double seconds = 0.0;
  long iters = 0;
  bool converged = false;
  bool failed = false;  // the method raised; norms are left empty
};

inline constexpr const char* kCsvHeader =
    "instance,method,omega,norm1,norm0,norm21,norm20,time_sec,iters,converged";

BenchRow make_row(const std::string& instance, const GInverseResult& res,
                  std::optional<double> omega = std::nullopt);
BenchRow failed_row(const std::string& instance, Method method,
                    std::optional<double> omega = std::nullopt);

// 17 significant digits; time_sec is left empty when omit_time is set so
// that repeated runs produce identical bytes.
std::string csv_line(const BenchRow& row, bool omit_time);
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows,
               bool omit_time);

// 6 significant digits, one "key value" pair per line.
void print_row(std::ostream& out, const BenchRow& row);

// Solver knobs shared by `solve` and `bench`; unset fields keep the
// per-method defaults.
struct SolveOptions {
  std::optional<double> rho;
  std::optional<double> eps_abs;
  std::optional<double> eps_rel;
  std::optional<double> fixed_eps;
  std::optional<double> time_limit;
  std::optional<long> max_iters;
  double omega = 0.8;
  std::optional<Index> gamma;
  double ls_epsilon = 1e-2;
  double zero_tol = kDefaultZeroTol;
  int threads = 1;
};

AdmmConfig admm_config(Method method, const SolveOptions& opt);

// Runs one method on A. admm20 and admm2120 solve admm21 first for the row
// budget (and, for admm2120, the warm start) unless opt.gamma is given.
// ls21 starts from the ls result.
GInverseResult run_method(Method method, const DenseMatrix& a,
                          const SpectralFactors& f, const SolveOptions& opt);

// Entry point; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace ginv::cli

#endif  // GINV_CLI_HPP_
