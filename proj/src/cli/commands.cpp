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

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <variant>

#include "ginv/cli.hpp"
#include "ginv/errors.hpp"
#include "ginv/exact_low_rank.hpp"
#include "ginv/instances.hpp"
#include "ginv/kernels.hpp"
#include "ginv/matrix_market.hpp"

namespace ginv::cli {
namespace {

const std::vector<std::string> kDefaultMethods = {
    "admm1", "admm21", "admm20", "admm2120", "ls", "ls21"};
const std::vector<double> kDefaultOmegas = {0.25, 0.5, 0.75, 0.8, 0.9, 0.95};

bool uses_omega(Method m) {
  return m == Method::admm20 || m == Method::admm2120;
}

Method method_or_throw(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw InvalidArgument("unknown method '" + name + "'");
  return *m;
}

SpectralFactors factors(const DenseMatrix& a, std::optional<Index> rank,
                        double rank_tol) {
  return rank ? svd_partition_with_rank(a, *rank) : svd_partition(a, rank_tol);
}

std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.rfind('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

void print_properties(std::ostream& out, const PropertyReport& p) {
  out << "p1         " << p.p1 << '\n'
      << "p2         " << p.p2 << '\n'
      << "p3         " << p.p3 << '\n'
      << "p4         " << p.p4 << '\n'
      << "reflex     " << p.reflex_linear << '\n';
}

void print_certificate(std::ostream& out, const CertificateReport& c) {
  out << "dual_obj   " << c.dual_objective << '\n'
      << "dual_row   " << c.max_row_norm << '\n'
      << "gap        " << c.gap << '\n';
  const double scale = std::max(1.0, std::abs(c.primal_21));
  if (c.feasible && c.gap <= 1e-8 * scale) {
    out << "certificate optimal (gap <= 1e-8)\n";
  } else if (c.feasible && c.gap <= 1e-6 * scale) {
    out << "certificate optimal (gap <= 1e-6)\n";
  } else if (c.feasible) {
    out << "certificate feasible, not tight\n";
  } else {
    out << "certificate infeasible\n";
  }
}

// Rows of admm21 shared by admm20, admm2120 and several omegas.
struct Precomputed {
  std::optional<GInverseResult> admm21;
  std::optional<GInverseResult> ls;
};

const GInverseResult& admm21_of(const SpectralFactors& f,
                                const SolveOptions& opt, Precomputed& pre) {
  if (!pre.admm21) pre.admm21 = admm21_solve(f, admm_config(Method::admm21, opt));
  return *pre.admm21;
}

GInverseResult run_cached(Method method, const DenseMatrix& a,
                          const SpectralFactors& f, const SolveOptions& opt,
                          Precomputed& pre) {
  switch (method) {
    case Method::admm1:
      return admm1_solve(f, admm_config(method, opt));
    case Method::admm21:
      return admm21_of(f, opt, pre);
    case Method::admm20:
    case Method::admm2120: {
      Index gamma = 0;
      if (opt.gamma) {
        gamma = *opt.gamma;
      } else {
        gamma = gamma_from_omega(f.rank, admm21_of(f, opt, pre).norms.n20,
                                 opt.omega);
      }
      if (method == Method::admm20)
        return admm20_solve(f, admm_config(method, opt), gamma);
      return admm2120_solve(f, admm_config(method, opt), gamma,
                            admm21_of(f, opt, pre));
    }
    case Method::ls:
    case Method::ls21: {
      LsConfig cfg;
      cfg.epsilon = opt.ls_epsilon;
      cfg.zero_tol = opt.zero_tol;
      if (!pre.ls) pre.ls = ls_det(a, f, cfg);
      if (method == Method::ls) return *pre.ls;
      cfg.criterion = LsConfig::Criterion::norm21;
      return ls_21(a, f, cfg, pre.ls->columns);
    }
    case Method::rank1:
      return rank1_optimal(a, opt.zero_tol).result;
    case Method::rank2: {
      auto out = rank2_candidate(a, opt.zero_tol);
      if (auto* ok = std::get_if<ExactResult>(&out)) return ok->result;
      const auto& fail = std::get<ConditionFailed>(out);
      std::ostringstream os;
      os << "rank2: condition fails at column " << fail.witness_column + 1
         << " with beta = (" << fail.beta[0] << ", " << fail.beta[1] << ")";
      throw DataError(os.str());
    }
  }
  throw InvalidArgument("unhandled method");
}

// --- subcommands --------------------------------------------------------------

struct GenArgs {
  Index m = 100;
  std::optional<Index> n, r;
  double density = 0.3;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_gen(const GenArgs& g, std::ostream& out) {
  InstanceSpec spec;
  spec.m = g.m;
  spec.n = g.n ? *g.n : g.m / 2;
  spec.r = g.r ? *g.r : g.m / 4;
  spec.density = g.density;
  spec.seed = g.seed;
  validate(spec);
  const DenseMatrix a = gen_rank_r(spec);
  write_matrix(g.out, a);
  const SpectralFactors f = svd_partition(a);
  out << "wrote " << g.out << ": " << a.rows() << " x " << a.cols()
      << ", rank " << f.rank << '\n';
  return kOk;
}

struct SolveArgs {
  std::string in;
  std::string method;
  std::optional<Index> rank;
  double rank_tol = kDefaultRankTol;
  std::string out_h;
  bool csv = false;
  SolveOptions opt;
};

int cmd_solve(const SolveArgs& s, std::ostream& out) {
  const Method method = method_or_throw(s.method);
  const DenseMatrix a = read_matrix(s.in);
  const SpectralFactors f = factors(a, s.rank, s.rank_tol);
  Precomputed pre;
  const GInverseResult res = run_cached(method, a, f, s.opt, pre);
  const std::optional<double> omega =
      uses_omega(method) && !s.opt.gamma ? std::optional(s.opt.omega)
                                         : std::nullopt;
  const BenchRow row = make_row(file_stem(s.in), res, omega);
  if (!s.out_h.empty()) write_matrix(s.out_h, res.h);
  if (s.csv) {
    write_csv(out, {row}, false);
    return kOk;
  }
  print_row(out, row);
  out << std::setprecision(6);
  if (uses_omega(method)) out << "gamma      " << res.gamma << '\n';
  out << "rank       " << f.rank << '\n';
  print_properties(out, mp_residuals(a, res.h, pseudoinverse(f)));
  return kOk;
}

struct CheckArgs {
  std::string a, h, w;
  bool certify = false;
  std::optional<Index> rank;
  double rank_tol = kDefaultRankTol;
  double zero_tol = kDefaultZeroTol;
};

int cmd_check(const CheckArgs& c, std::ostream& out) {
  const DenseMatrix a = read_matrix(c.a);
  const DenseMatrix h = read_matrix(c.h);
  if (h.rows() != a.cols() || h.cols() != a.rows()) {
    throw DimensionError("H is " + std::to_string(h.rows()) + " x " +
                         std::to_string(h.cols()) + ", expected " +
                         std::to_string(a.cols()) + " x " +
                         std::to_string(a.rows()));
  }
  const SpectralFactors f = factors(a, c.rank, c.rank_tol);
  const NormReport nr = norms(h, c.zero_tol);
  out << std::setprecision(6);
  out << "rank       " << f.rank << '\n'
      << "norm1      " << nr.n1 << '\n'
      << "norm0      " << nr.n0 << '\n'
      << "norm21     " << nr.n21 << '\n'
      << "norm20     " << nr.n20 << '\n';
  print_properties(out, mp_residuals(a, h, pseudoinverse(f)));
  if (!c.certify) return kOk;

  DenseMatrix w;
  if (!c.w.empty()) {
    w = read_matrix(c.w);
  } else if (f.rank == 1) {
    w = rank1_optimal(a, c.zero_tol).w;
  } else if (f.rank == 2) {
    auto cand = rank2_candidate(a, c.zero_tol);
    if (auto* ok = std::get_if<ExactResult>(&cand)) {
      w = ok->w;
    } else {
      out << "certificate unavailable (rank-2 condition fails)\n";
      return kOk;
    }
  } else {
    throw InvalidArgument("--certify needs rank <= 2 or --w");
  }
  print_certificate(out, verify_certificate(a, h, w));
  return kOk;
}

struct ApplyArgs {
  std::string h, b, out;
  double zero_tol = kDefaultZeroTol;
};

int cmd_apply(const ApplyArgs& p, std::ostream& out) {
  const DenseMatrix h = read_matrix(p.h);
  const DenseMatrix b = read_matrix(p.b);
  const DenseMatrix theta = multi_rhs_apply(h, b, p.zero_tol);
  if (p.out.empty()) {
    write_matrix_market(out, theta);
  } else {
    write_matrix(p.out, theta);
  }
  return kOk;
}

struct BenchArgs {
  std::vector<Index> sizes{100};
  std::vector<std::string> methods = kDefaultMethods;
  std::vector<double> omegas = kDefaultOmegas;
  std::uint64_t seed = 1;
  double density = 0.3;
  std::string csv;
  bool omit_time = false;
  SolveOptions opt;
};

int cmd_bench(const BenchArgs& b, std::ostream& out, std::ostream& err) {
  std::vector<Method> methods;
  for (const std::string& name : b.methods)
    if (!name.empty()) methods.push_back(method_or_throw(name));
  for (double w : b.omegas)
    if (!(w > 0.0 && w < 1.0)) throw InvalidArgument("omega must lie in (0, 1)");

  std::vector<BenchRow> rows;
  for (Index m : b.sizes) {
    if (methods.empty()) break;
    InstanceSpec spec = InstanceSpec::standard(m, b.seed);
    spec.density = b.density;
    validate(spec);
    const std::string name = "m" + std::to_string(m) + "_s" + std::to_string(b.seed);
    const DenseMatrix a = gen_rank_r(spec);
    const SpectralFactors f = svd_partition_with_rank(a, spec.r);
    Precomputed pre;
    for (Method method : methods) {
      std::vector<std::optional<double>> grid;
      if (uses_omega(method)) {
        for (double w : b.omegas) grid.emplace_back(w);
      } else {
        grid.emplace_back(std::nullopt);
      }
      for (const auto& omega : grid) {
        SolveOptions opt = b.opt;
        if (omega) opt.omega = *omega;
        try {
          rows.push_back(make_row(name, run_cached(method, a, f, opt, pre), omega));
        } catch (const Error& e) {
          err << name << " " << method_name(method) << ": " << e.what() << '\n';
          rows.push_back(failed_row(name, method, omega));
        }
      }
    }
  }

  if (b.csv.empty() || b.csv == "-") {
    write_csv(out, rows, b.omit_time);
  } else {
    std::ofstream file(b.csv);
    if (!file) throw ParseError("cannot write '" + b.csv + "'", 0);
    write_csv(file, rows, b.omit_time);
    out << "wrote " << rows.size() << " rows to " << b.csv << '\n';
  }
  return kOk;
}

struct WorstArgs {
  Index r = 3;
  double delta = 1e-4;
  Index embed_m = 0;
  Index embed_n = 0;
  double ls_epsilon = 1e-2;
};

int cmd_worstcase(const WorstArgs& w, std::ostream& out, std::ostream& err) {
  WorstCaseSpec spec;
  spec.r = w.r;
  spec.delta = w.delta;
  spec.embed_m = w.embed_m;
  spec.embed_n = w.embed_n;
  const WorstCaseInstance inst = worst_case_build(spec);
  if (inst.delta_is_large)
    err << "warning: delta >= 0.5, the instance is far from the limit\n";

  const SpectralFactors f = svd_partition_with_rank(inst.a_full, w.r);
  Basis start;
  for (Index i = 0; i < w.r; ++i) {
    start.s.push_back(i);
    start.t.push_back(i);
  }
  LsConfig cfg;
  cfg.epsilon = w.ls_epsilon;
  const GInverseResult ls = ls_det(inst.a_full, f, cfg, start);

  IndexList best_t = start.t;
  best_t[0] = inst.b_column;
  const NormReport opt = norms(column_block(inst.a_full, best_t));
  const double ratio = ls.norms.n21 / opt.n21;

  out << std::setprecision(6);
  out << "r          " << w.r << '\n'
      << "delta      " << w.delta << '\n'
      << "ls_swaps   " << ls.iters << '\n'
      << "ls_norm21  " << ls.norms.n21 << '\n'
      << "opt_norm21 " << opt.n21 << '\n'
      << "ratio      " << ratio << '\n'
      << "limit      " << w.r << '\n';
  return kOk;
}

}  // namespace

AdmmConfig admm_config(Method method, const SolveOptions& opt) {
  AdmmConfig cfg;
  switch (method) {
    case Method::admm1:
      cfg = AdmmConfig::admm1_defaults();
      break;
    case Method::admm20:
      cfg = AdmmConfig::admm20_defaults();
      break;
    case Method::admm2120:
      cfg = AdmmConfig::admm2120_defaults();
      break;
    default:
      cfg = AdmmConfig::admm21_defaults();
      break;
  }
  if (opt.rho) cfg.rho = *opt.rho;
  if (opt.eps_abs) cfg.eps_abs = *opt.eps_abs;
  if (opt.eps_rel) cfg.eps_rel = *opt.eps_rel;
  if (opt.fixed_eps) cfg.fixed_eps = opt.fixed_eps;
  if (opt.time_limit) cfg.max_seconds = *opt.time_limit;
  if (opt.max_iters) cfg.max_iters = opt.max_iters;
  cfg.omega = opt.omega;
  cfg.gamma = opt.gamma;
  cfg.zero_tol = opt.zero_tol;
  cfg.threads = opt.threads;
  return cfg;
}

GInverseResult run_method(Method method, const DenseMatrix& a,
                          const SpectralFactors& f, const SolveOptions& opt) {
  Precomputed pre;
  return run_cached(method, a, f, opt, pre);
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Sparse ah-symmetric reflexive generalized inverses"};
  app.require_subcommand(1);
  // "-h" stays free: `check` and `apply` take --h for the inverse.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random rank-r instance");
  g->add_option("--m", gen.m, "Rows")->check(CLI::PositiveNumber);
  g->add_option("--n", gen.n, "Columns (default m/2)");
  g->add_option("--r", gen.r, "Rank (default m/4)");
  g->add_option("--density", gen.density, "Factor density in (0, 1]");
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("--out", gen.out, "Matrix Market output")->required();

  auto add_solver_flags = [](CLI::App* sub, SolveOptions& o) {
    sub->add_option("--rho", o.rho, "ADMM penalty");
    sub->add_option("--eps-abs", o.eps_abs, "Absolute tolerance");
    sub->add_option("--eps-rel", o.eps_rel, "Relative tolerance");
    sub->add_option("--fixed-eps", o.fixed_eps, "Fixed residual tolerance");
    sub->add_option("--time-limit", o.time_limit, "Seconds per solve");
    sub->add_option("--max-iters", o.max_iters, "Iterations per solve");
    sub->add_option("--gamma", o.gamma, "Row budget for admm20/admm2120");
    sub->add_option("--epsilon", o.ls_epsilon, "Local-search improvement factor");
    sub->add_option("--zero-tol", o.zero_tol, "Zero tolerance of the norms");
  };

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Compute a sparse generalized inverse");
  s->add_option("--in", solve.in, "Matrix Market input")->required();
  s->add_option("--method", solve.method,
                "admm1|admm21|admm20|admm2120|ls|ls21|rank1|rank2")
      ->required();
  s->add_option("--omega", solve.opt.omega, "Row-budget interpolation");
  s->add_option("--rank", solve.rank, "Truncate the SVD at this rank");
  s->add_option("--rank-tol", solve.rank_tol, "Relative rank tolerance");
  s->add_option("--out-h", solve.out_h, "Write H as Matrix Market");
  s->add_flag("--csv", solve.csv, "Print a CSV row");
  add_solver_flags(s, solve.opt);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Verify properties of H");
  c->add_option("--a", check.a, "Matrix A")->required();
  c->add_option("--h", check.h, "Candidate inverse H")->required();
  c->add_option("--w", check.w, "Dual certificate W");
  c->add_flag("--certify", check.certify, "Check 2,1-optimality");
  c->add_option("--rank", check.rank, "Truncate the SVD at this rank");
  c->add_option("--rank-tol", check.rank_tol, "Relative rank tolerance");
  c->add_option("--zero-tol", check.zero_tol, "Zero tolerance of the norms");

  ApplyArgs apply;
  auto* p = app.add_subcommand("apply", "Least-squares solutions H * B");
  p->add_option("--h", apply.h, "Generalized inverse H")->required();
  p->add_option("--b", apply.b, "Right-hand sides B")->required();
  p->add_option("--out", apply.out, "Output (default stdout)");
  p->add_option("--zero-tol", apply.zero_tol, "Rows of H below this are skipped");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Benchmark table over random instances");
  b->add_option("--sizes", bench.sizes, "Row counts m")->delimiter(',');
  b->add_option("--methods", bench.methods, "Methods")->delimiter(',');
  b->add_option("--omegas", bench.omegas, "omega grid")->delimiter(',');
  b->add_option("--seed", bench.seed, "Instance seed");
  b->add_option("--density", bench.density, "Factor density");
  b->add_option("--csv", bench.csv, "CSV output (default stdout)");
  b->add_flag("--omit-time", bench.omit_time, "Leave time_sec empty");
  add_solver_flags(b, bench.opt);

  WorstArgs worst;
  auto* wc = app.add_subcommand("worstcase", "Tightness of the determinant bound");
  wc->add_option("--r", worst.r, "Rank");
  wc->add_option("--delta", worst.delta, "Toeplitz step");
  wc->add_option("--embed-m", worst.embed_m, "Rows of the padded matrix");
  wc->add_option("--embed-n", worst.embed_n, "Columns of the padded matrix");
  wc->add_option("--epsilon", worst.ls_epsilon, "Local-search improvement factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const int threads = kernels::threads_from_env();
  solve.opt.threads = threads;
  bench.opt.threads = threads;

  try {
    if (g->parsed()) return cmd_gen(gen, out);
    if (s->parsed()) return cmd_solve(solve, out);
    if (c->parsed()) return cmd_check(check, out);
    if (p->parsed()) return cmd_apply(apply, out);
    if (b->parsed()) return cmd_bench(bench, out, err);
    if (wc->parsed()) return cmd_worstcase(worst, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace ginv::cli
