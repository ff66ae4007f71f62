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

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "ginv/cli.hpp"
#include "ginv/matrix_market.hpp"
#include "oracles.hpp"

using namespace ginv;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ginv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Value printed after `key` in "key value" output.
double value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string k;
  std::string v;
  while (in >> k) {
    std::getline(in, v);
    if (k == key) return std::stod(v);
  }
  FAIL("missing key " << key);
  return 0.0;
}

// Scratch directory removed at scope exit.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ginv_cli_" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string operator()(const std::string& name) const {
    return (path / name).string();
  }
};

std::string write_path(const TempDir& dir) {
  DenseMatrix a(2, 3);
  a << 1, 1, 0, 0, 1, 1;
  write_matrix(dir("path.mtx"), a);
  return dir("path.mtx");
}

}  // namespace

TEST_CASE("gen writes an instance") {
  TempDir dir;
  Run r = invoke({"gen", "--m", "20", "--seed", "3", "--out", dir("a.mtx")});
  CHECK(r.code == 0);
  const DenseMatrix a = read_matrix(dir("a.mtx"));
  CHECK(a.rows() == 20);
  CHECK(a.cols() == 10);
  CHECK(svd_partition(a).rank == 5);

  r = invoke({"gen", "--m", "20", "--seed", "3", "--out", dir("b.mtx")});
  CHECK(read_matrix(dir("b.mtx")) == a);
}

TEST_CASE("gen usage errors") {
  TempDir dir;
  CHECK(invoke({"gen", "--m", "10"}).code == cli::kUsage);
  CHECK(invoke({"gen", "--m", "100", "--n", "50", "--r", "60", "--out",
             dir("x.mtx")})
            .code == cli::kUsage);
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("solve runs every method on the path matrix") {
  TempDir dir;
  const std::string in = write_path(dir);
  for (const char* m : {"admm1", "admm21", "admm20", "admm2120", "ls", "ls21"}) {
    const Run r = invoke({"solve", "--in", in, "--method", m});
    INFO(m << ": " << r.err);
    REQUIRE(r.code == 0);
    CHECK(value_of(r.out, "p1") < 1e-6);
    CHECK(value_of(r.out, "p3") < 1e-6);
    CHECK(value_of(r.out, "rank") == 2);
  }
  const Run r = invoke({"solve", "--in", in, "--method", "admm21"});
  CHECK(value_of(r.out, "norm21") == doctest::Approx(1.93185).epsilon(1e-5));
  CHECK(invoke({"solve", "--in", in, "--method", "ls21"}).out.find("norm21     2\n") !=
        std::string::npos);
}

TEST_CASE("solve csv output") {
  TempDir dir;
  const std::string in = write_path(dir);
  const Run r = invoke({"solve", "--in", in, "--method", "ls", "--csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header == cli::kCsvHeader);
  CHECK(row.rfind("path,ls,,", 0) == 0);
  CHECK(row.substr(row.size() - 5) == ",true");
}

TEST_CASE("solve errors map to exit codes") {
  TempDir dir;
  const std::string in = write_path(dir);
  const Run rank1 = invoke({"solve", "--in", in, "--method", "rank1"});
  CHECK(rank1.code == cli::kData);
  CHECK(rank1.err.find("rank") != std::string::npos);
  CHECK(invoke({"solve", "--in", in, "--method", "rank2"}).code == cli::kData);
  CHECK(invoke({"solve", "--in", in, "--method", "simplex"}).code == cli::kUsage);
  CHECK(invoke({"solve", "--in", dir("missing.mtx"), "--method", "ls"}).code == cli::kData);
  CHECK(invoke({"solve", "--in", in, "--omega", "1.5"}).code == cli::kUsage);
  CHECK(invoke({"solve", "--in", in, "--method", "admm20", "--gamma", "1"}).code ==
        cli::kUsage);
}

TEST_CASE("solve --out-h feeds check") {
  TempDir dir;
  const std::string in = write_path(dir);
  REQUIRE(invoke({"solve", "--in", in, "--method", "admm21", "--out-h",
               dir("h.mtx")})
              .code == 0);
  Run r = invoke({"check", "--a", in, "--h", dir("h.mtx")});
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "norm21") == doctest::Approx(1.93185).epsilon(1e-5));
  CHECK(value_of(r.out, "p1") < 1e-6);

  r = invoke({"check", "--a", in, "--h", dir("h.mtx"), "--certify"});
  CHECK(r.code == 0);
  CHECK(r.out.find("certificate unavailable") != std::string::npos);
}

TEST_CASE("check with the pseudoinverse and with zero") {
  TempDir dir;
  const std::string in = write_path(dir);
  const DenseMatrix a = read_matrix(in);
  write_matrix(dir("pinv.mtx"), oracle::pinv_general(a));
  Run r = invoke({"check", "--a", in, "--h", dir("pinv.mtx")});
  REQUIRE(r.code == 0);
  CHECK(value_of(r.out, "p4") < 1e-10);

  write_matrix(dir("zero.mtx"), DenseMatrix::Zero(3, 2));
  r = invoke({"check", "--a", in, "--h", dir("zero.mtx")});
  CHECK(r.code == 0);
  CHECK(value_of(r.out, "p1") == doctest::Approx(a.norm()).epsilon(1e-5));

  write_matrix(dir("wrong.mtx"), DenseMatrix::Zero(2, 3));
  CHECK(invoke({"check", "--a", in, "--h", dir("wrong.mtx")}).code == cli::kData);
}

TEST_CASE("check --certify on a rank-1 solution") {
  TempDir dir;
  DenseMatrix a(2, 2);
  a << 1, 2, 2, 4;
  write_matrix(dir("a.mtx"), a);
  REQUIRE(invoke({"solve", "--in", dir("a.mtx"), "--method", "rank1", "--out-h",
               dir("h.mtx")})
              .code == 0);
  const Run r = invoke({"check", "--a", dir("a.mtx"), "--h", dir("h.mtx"), "--certify"});
  CHECK(r.code == 0);
  CHECK(r.out.find("certificate optimal (gap <= 1e-8)") != std::string::npos);
}

TEST_CASE("apply writes least-squares solutions") {
  TempDir dir;
  const std::string in = write_path(dir);
  REQUIRE(invoke({"solve", "--in", in, "--method", "ls21", "--out-h", dir("h.mtx")})
              .code == 0);
  DenseMatrix b(2, 2);
  b << 1, 0, 1, 2;
  write_matrix(dir("b.mtx"), b);
  const Run r = invoke({"apply", "--h", dir("h.mtx"), "--b", dir("b.mtx")});
  REQUIRE(r.code == 0);
  std::istringstream mm(r.out);
  const DenseMatrix theta = read_matrix_market(mm);
  const DenseMatrix a = read_matrix(in);
  for (Index k = 0; k < 2; ++k)
    CHECK(oracle::normal_residual(a, theta.col(k), b.col(k)) < 1e-10);
  // Two rows of H are nonzero, so theta has a zero row.
  CHECK(theta.row(1).norm() == 0.0);
  CHECK(invoke({"apply", "--h", dir("h.mtx"), "--b", dir("h.mtx")}).code == cli::kData);
}

TEST_CASE("bench with no methods prints the header only") {
  const Run r = invoke({"bench", "--sizes", "8", "--methods", ""});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(cli::kCsvHeader) + "\n");
}

TEST_CASE("bench csv is byte-stable without timings") {
  const std::vector<std::string> args = {
      "bench", "--sizes", "20,24", "--methods", "admm21,admm20,ls,ls21",
      "--omegas", "0.5,0.9", "--seed", "4", "--omit-time"};
  const Run first = invoke(args);
  const Run second = invoke(args);
  REQUIRE(first.code == 0);
  CHECK(first.out == second.out);
  // Header, then per size: admm21, two admm20 rows, ls, ls21.
  std::istringstream lines(first.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 1 + 2 * 5);
  CHECK(first.out.find("m20_s4,admm20,0.5,") != std::string::npos);
}

TEST_CASE("bench admm20 row counts follow the omega budget") {
  const Run r = invoke({"bench", "--sizes", "40", "--methods", "admm21,admm20",
                     "--omegas", "0.25,0.95", "--omit-time"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    rows.push_back(f);
  }
  REQUIRE(rows.size() == 3);
  const long n20_opt = std::stol(rows[0][6]);
  const long low = std::stol(rows[1][6]);
  const long high = std::stol(rows[2][6]);
  CHECK(low <= gamma_from_omega(10, n20_opt, 0.25));
  CHECK(high <= gamma_from_omega(10, n20_opt, 0.95));
  CHECK(gamma_from_omega(10, n20_opt, 0.95) <= gamma_from_omega(10, n20_opt, 0.25));
}

TEST_CASE("bench rejects bad arguments") {
  CHECK(invoke({"bench", "--methods", "nope"}).code == cli::kUsage);
  CHECK(invoke({"bench", "--omegas", "0"}).code == cli::kUsage);
  CHECK(invoke({"bench", "--sizes", "2"}).code == cli::kUsage);
}

TEST_CASE("worstcase reports the tightness ratio") {
  for (int r : {2, 3, 4}) {
    const Run out = invoke({"worstcase", "--r", std::to_string(r)});
    REQUIRE(out.code == 0);
    CHECK(value_of(out.out, "ls_swaps") == 0);
    CHECK(value_of(out.out, "ratio") == doctest::Approx(r).epsilon(0.01));
  }
  CHECK(invoke({"worstcase", "--r", "1"}).code == cli::kUsage);
  const Run big = invoke({"worstcase", "--delta", "0.7"});
  CHECK(big.code == 0);
  CHECK(big.err.find("warning") != std::string::npos);
}
