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

#include "ginv/admm.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>

#include "ginv/errors.hpp"
#include "ginv/kernels.hpp"

namespace ginv {
namespace {

namespace kn = kernels::omp;

constexpr std::array<std::pair<Method, std::string_view>, 8> kMethodNames{{
    {Method::admm1, "admm1"},
    {Method::admm21, "admm21"},
    {Method::admm20, "admm20"},
    {Method::admm2120, "admm2120"},
    {Method::ls, "ls"},
    {Method::ls21, "ls21"},
    {Method::rank1, "rank1"},
    {Method::rank2, "rank2"},
}};

class Budget {
 public:
  explicit Budget(const AdmmConfig& cfg)
      : start_(std::chrono::steady_clock::now()),
        max_seconds_(cfg.max_seconds),
        max_iters_(cfg.max_iters) {}

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  bool exhausted(long iters) const {
    if (max_iters_ && iters >= *max_iters_) return true;
    return elapsed() >= max_seconds_;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  double max_seconds_;
  std::optional<long> max_iters_;
};

double norm21(const DenseMatrix& e) { return e.rowwise().norm().sum(); }

int threads_ok(int threads) { return threads < 1 ? 1 : threads; }

GInverseResult make_result(const SpectralFactors& f, Method method,
                           const AdmmState& state, const Budget& budget,
                           bool converged, double zero_tol) {
  GInverseResult res;
  res.method = method;
  res.h = assemble_h(f, state.z);
  res.iters = state.iter;
  res.converged = converged;
  res.state = state;
  finalize(f, zero_tol, res);
  res.seconds = budget.elapsed();
  return res;
}

bool reduced_stop(const ReducedAdmm& admm, const AdmmConfig& cfg) {
  return cfg.fixed_eps ? admm.fixed_stop(*cfg.fixed_eps)
                       : admm.dynamic_stop(cfg.eps_abs, cfg.eps_rel);
}

}  // namespace

std::string_view method_name(Method m) {
  for (const auto& [method, name] : kMethodNames)
    if (method == m) return name;
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (const auto& [method, label] : kMethodNames)
    if (label == name) return method;
  return std::nullopt;
}

AdmmConfig AdmmConfig::admm1_defaults() {
  AdmmConfig cfg;
  cfg.rho = 3.0;
  cfg.eps_abs = 1e-4;
  cfg.eps_rel = 1e-4;
  return cfg;
}

AdmmConfig AdmmConfig::admm21_defaults() {
  AdmmConfig cfg;
  cfg.rho = 1.0;
  cfg.eps_abs = 1e-7;
  cfg.eps_rel = 1e-7;
  return cfg;
}

AdmmConfig AdmmConfig::admm20_defaults() {
  // rho does not enter the projection step.
  AdmmConfig cfg;
  cfg.rho = 1.0;
  return cfg;
}

AdmmConfig AdmmConfig::admm2120_defaults() {
  AdmmConfig cfg;
  cfg.rho = cfg.rho_schedule.initial;
  cfg.eps_abs = 1e-4;
  cfg.eps_rel = 1e-4;
  return cfg;
}

void validate(const AdmmConfig& cfg) {
  if (!(cfg.rho > 0.0)) throw InvalidArgument("admm: rho must be positive");
  if (!(cfg.eps_abs > 0.0) || !(cfg.eps_rel > 0.0))
    throw InvalidArgument("admm: tolerances must be positive");
  if (cfg.fixed_eps && !(*cfg.fixed_eps > 0.0))
    throw InvalidArgument("admm: fixed tolerance must be positive");
  if (!(cfg.max_seconds > 0.0))
    throw InvalidArgument("admm: time limit must be positive");
  if (cfg.max_iters && *cfg.max_iters < 1)
    throw InvalidArgument("admm: iteration limit must be >= 1");
  if (!(cfg.omega > 0.0 && cfg.omega < 1.0))
    throw InvalidArgument("admm: omega must lie in (0, 1)");
  if (cfg.zero_tol < 0.0) throw InvalidArgument("admm: zero_tol must be >= 0");
  const RhoSchedule& s = cfg.rho_schedule;
  if (!(s.initial > 0.0) || !(s.primal_gate > 0.0) || !(s.alpha_min >= 1.0) ||
      !(s.alpha_max >= s.alpha_min) || !(s.alpha_decay > 0.0 && s.alpha_decay < 1.0))
    throw InvalidArgument("admm: inconsistent rho schedule");
}

void finalize(const SpectralFactors& f, double zero_tol, GInverseResult& res) {
  res.norms = norms(res.h, zero_tol);
  res.properties = mp_residuals(reconstruct(f), res.h, pseudoinverse(f));
}

double soft_threshold(double a, double kappa) {
  if (kappa < 0.0) throw InvalidArgument("soft_threshold: kappa must be >= 0");
  if (a > kappa) return a - kappa;
  if (a < -kappa) return a + kappa;
  return 0.0;
}

DenseMatrix soft_threshold(const DenseMatrix& y, double rho, int threads) {
  if (!(rho > 0.0)) throw InvalidArgument("soft_threshold: rho must be > 0");
  DenseMatrix e;
  kn::soft_threshold(y, 1.0 / rho, e, threads_ok(threads));
  return e;
}

DenseMatrix row_shrink(const DenseMatrix& y, double rho, int threads) {
  if (!(rho > 0.0)) throw InvalidArgument("row_shrink: rho must be > 0");
  DenseMatrix e;
  kn::row_shrink(y, rho, e, threads_ok(threads));
  return e;
}

DenseMatrix project_row_support(const DenseMatrix& y, Index gamma,
                                int threads) {
  if (gamma < 0) throw InvalidArgument("project_row_support: gamma < 0");
  DenseMatrix e;
  kn::project_row_support(y, gamma, e, threads_ok(threads));
  return e;
}

DenseMatrix row_shrink_capped(const DenseMatrix& y, double rho, Index gamma,
                              int threads) {
  if (!(rho > 0.0)) throw InvalidArgument("row_shrink_capped: rho must be > 0");
  if (gamma < 0) throw InvalidArgument("row_shrink_capped: gamma < 0");
  DenseMatrix e;
  kn::row_shrink_capped(y, rho, gamma, e, threads_ok(threads));
  return e;
}

DenseMatrix z_update(const DenseMatrix& j, const SpectralFactors& f,
                     bool project_u1, int threads) {
  const Index n = f.cols();
  const Index want_cols = project_u1 ? f.rows() : f.rank;
  if (j.rows() != n || j.cols() != want_cols)
    throw DimensionError("z_update: unexpected shape of J");
  DenseMatrix v2t_j, z;
  kn::multiply_tn(f.v2, j, v2t_j, threads_ok(threads));
  if (!project_u1) return v2t_j;
  kn::multiply(v2t_j, f.u1, z, threads_ok(threads));
  return z;
}

Index gamma_from_omega(Index r, Index n20_opt, double omega) {
  if (!(omega > 0.0 && omega < 1.0))
    throw InvalidArgument("gamma_from_omega: omega must lie in (0, 1)");
  const double target =
      omega * static_cast<double>(r) + (1.0 - omega) * static_cast<double>(n20_opt);
  // The 1e-9 keeps exact integers such as 32.0 from flooring to 31.
  const auto budget = static_cast<Index>(std::floor(target + 1e-9));
  return std::max(r, budget);
}

// --- ReducedAdmm -------------------------------------------------------------

ReducedAdmm::ReducedAdmm(const SpectralFactors& f, EStep kind, double rho,
                         Index gamma, int threads)
    : f_(f),
      kind_(kind),
      gamma_(gamma),
      threads_(threads_ok(threads)),
      k0_(f.v1_dinv()) {
  if (!(rho > 0.0)) throw InvalidArgument("admm: rho must be positive");
  state_.rho = rho;
  state_.z = DenseMatrix::Zero(f.v2.cols(), f.rank);
  state_.e = k0_;
  state_.lambda = DenseMatrix::Zero(k0_.rows(), k0_.cols());
  k_ = k0_;
  residual_ = DenseMatrix::Zero(k0_.rows(), k0_.cols());
}

void ReducedAdmm::reset(AdmmState state) {
  if (state.e.rows() != k0_.rows() || state.e.cols() != k0_.cols() ||
      state.lambda.rows() != k0_.rows() || state.lambda.cols() != k0_.cols())
    throw DimensionError("admm: E and Lambda must be n x r");
  if (!(state.rho > 0.0)) throw InvalidArgument("admm: rho must be positive");
  if (state.z.rows() != f_.v2.cols() || state.z.cols() != f_.rank)
    state.z = DenseMatrix::Zero(f_.v2.cols(), f_.rank);
  state_ = std::move(state);
  kn::multiply(f_.v2, state_.z, v2z_, threads_);
  k_ = k0_ + v2z_;
  residual_ = k_ - state_.e;
}

void ReducedAdmm::set_rho(double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("admm: rho must be positive");
  state_.lambda *= state_.rho / rho;
  state_.rho = rho;
}

void ReducedAdmm::step() {
  AdmmState& s = state_;
  // Z-step: argmin ||E - V1 D^-1 - V2 Z - Lambda||_F.
  work_ = s.e - k0_ - s.lambda;
  kn::multiply_tn(f_.v2, work_, s.z, threads_);
  kn::multiply(f_.v2, s.z, v2z_, threads_);
  k_ = k0_ + v2z_;

  // E-step on Y = V1 D^-1 + V2 Z + Lambda.
  work_ = k_ + s.lambda;
  DenseMatrix e_next;
  switch (kind_) {
    case EStep::shrink:
      kn::row_shrink(work_, s.rho, e_next, threads_);
      break;
    case EStep::project:
      kn::project_row_support(work_, gamma_, e_next, threads_);
      break;
    case EStep::capped_shrink:
      kn::row_shrink_capped(work_, s.rho, gamma_, e_next, threads_);
      break;
  }

  residual_ = k_ - e_next;
  s.lambda += residual_;
  work_ = e_next - s.e;
  s.e = std::move(e_next);

  kn::multiply_tn(f_.v2, work_, proj_, threads_);
  s.dual_res = s.rho * proj_.norm();
  s.primal_res = residual_.norm();
  kn::multiply_tn(f_.v2, s.lambda, proj_, threads_);
  v2t_lambda_norm_ = proj_.norm();
  ++s.iter;
}

bool ReducedAdmm::dynamic_stop(double eps_abs, double eps_rel) const {
  const auto n = static_cast<double>(f_.cols());
  const auto r = static_cast<double>(f_.rank);
  const double primal_tol =
      eps_abs * std::sqrt(n * r) +
      eps_rel * std::max({state_.e.norm(), v2z_.norm(), k0_.norm()});
  const double dual_tol = eps_abs * std::sqrt((n - r) * r) +
                          eps_rel * state_.rho * v2t_lambda_norm_;
  return state_.primal_res <= primal_tol && state_.dual_res <= dual_tol;
}

bool ReducedAdmm::fixed_stop(double eps) const {
  return state_.primal_res <= eps && state_.dual_res <= eps;
}

// --- FullAdmm ----------------------------------------------------------------

FullAdmm::FullAdmm(const SpectralFactors& f, double rho, int threads)
    : f_(f), threads_(threads_ok(threads)), h0_(pseudoinverse(f)) {
  if (!(rho > 0.0)) throw InvalidArgument("admm: rho must be positive");
  state_.rho = rho;
  state_.z = DenseMatrix::Zero(f.v2.cols(), f.rank);
  state_.e = h0_;
  state_.lambda = DenseMatrix::Zero(h0_.rows(), h0_.cols());
  v2zu_ = DenseMatrix::Zero(h0_.rows(), h0_.cols());
  residual_ = DenseMatrix::Zero(h0_.rows(), h0_.cols());
}

void FullAdmm::reset(AdmmState state) {
  if (state.e.rows() != h0_.rows() || state.e.cols() != h0_.cols() ||
      state.lambda.rows() != h0_.rows() || state.lambda.cols() != h0_.cols())
    throw DimensionError("admm1: E and Lambda must be n x m");
  if (!(state.rho > 0.0)) throw InvalidArgument("admm: rho must be positive");
  if (state.z.rows() != f_.v2.cols() || state.z.cols() != f_.rank)
    state.z = DenseMatrix::Zero(f_.v2.cols(), f_.rank);
  state_ = std::move(state);
  kn::multiply(f_.v2, state_.z, small_, threads_);
  kn::multiply_nt(small_, f_.u1, v2zu_, threads_);
  residual_ = h0_ + v2zu_ - state_.e;
}

void FullAdmm::step() {
  AdmmState& s = state_;
  // Z = V2^T J U1 with J = E - V1 D^-1 U1^T - Lambda.
  work_ = s.e - h0_ - s.lambda;
  kn::multiply_tn(f_.v2, work_, tmp_, threads_);
  kn::multiply(tmp_, f_.u1, s.z, threads_);
  kn::multiply(f_.v2, s.z, small_, threads_);
  kn::multiply_nt(small_, f_.u1, v2zu_, threads_);

  work_ = h0_ + v2zu_ + s.lambda;
  DenseMatrix e_next;
  kn::soft_threshold(work_, 1.0 / s.rho, e_next, threads_);

  residual_ = h0_ + v2zu_ - e_next;
  s.lambda += residual_;
  work_ = e_next - s.e;
  s.e = std::move(e_next);

  kn::multiply_tn(f_.v2, work_, tmp_, threads_);
  kn::multiply(tmp_, f_.u1, small_, threads_);
  s.dual_res = s.rho * small_.norm();
  s.primal_res = residual_.norm();
  kn::multiply_tn(f_.v2, s.lambda, tmp_, threads_);
  kn::multiply(tmp_, f_.u1, small_, threads_);
  v2t_lambda_u1_norm_ = small_.norm();
  ++s.iter;
}

bool FullAdmm::dynamic_stop(double eps_abs, double eps_rel) const {
  const auto n = static_cast<double>(f_.cols());
  const auto m = static_cast<double>(f_.rows());
  const auto r = static_cast<double>(f_.rank);
  const double primal_tol =
      eps_abs * std::sqrt(n * m) +
      eps_rel * std::max({state_.e.norm(), v2zu_.norm(), h0_.norm()});
  const double dual_tol = eps_abs * std::sqrt((n - r) * r) +
                          eps_rel * state_.rho * v2t_lambda_u1_norm_;
  return state_.primal_res <= primal_tol && state_.dual_res <= dual_tol;
}

bool FullAdmm::fixed_stop(double eps) const {
  return state_.primal_res <= eps && state_.dual_res <= eps;
}

// --- solvers -------------------------------------------------------------------

GInverseResult admm1_solve(const SpectralFactors& f, const AdmmConfig& cfg) {
  validate(cfg);
  const Budget budget(cfg);
  FullAdmm admm(f, cfg.rho, cfg.threads);

  // Dual-feasible start Theta = V1 U1^T / max|.|, so that Z^1 = 0.
  AdmmState init;
  init.rho = cfg.rho;
  const DenseMatrix theta = f.v1 * f.u1.transpose();
  const double scale = theta.cwiseAbs().maxCoeff();
  init.lambda = theta / (scale * cfg.rho);
  init.e = admm.h0() + init.lambda;
  admm.reset(std::move(init));

  std::vector<double> trace;
  bool converged = false;
  while (!budget.exhausted(admm.state().iter)) {
    admm.step();
    if (cfg.record_trace) trace.push_back(admm.state().e.cwiseAbs().sum());
    converged = cfg.fixed_eps ? admm.fixed_stop(*cfg.fixed_eps)
                              : admm.dynamic_stop(cfg.eps_abs, cfg.eps_rel);
    if (converged) break;
  }
  GInverseResult res =
      make_result(f, Method::admm1, admm.state(), budget, converged, cfg.zero_tol);
  res.trace = std::move(trace);
  return res;
}

GInverseResult admm21_solve(const SpectralFactors& f, const AdmmConfig& cfg) {
  validate(cfg);
  const Budget budget(cfg);
  ReducedAdmm admm(f, ReducedAdmm::EStep::shrink, cfg.rho, 0, cfg.threads);

  // Dual-feasible start Theta = V1 / max_i ||V1[i, .]||.
  AdmmState init;
  init.rho = cfg.rho;
  const double kappa = f.v1.rowwise().norm().maxCoeff();
  init.lambda = f.v1 / (kappa * cfg.rho);
  init.e = f.v1_dinv() + init.lambda;
  admm.reset(std::move(init));

  std::vector<double> trace;
  bool converged = false;
  while (!budget.exhausted(admm.state().iter)) {
    admm.step();
    if (cfg.record_trace) trace.push_back(norm21(admm.state().e));
    converged = reduced_stop(admm, cfg);
    if (converged) break;
  }
  GInverseResult res = make_result(f, Method::admm21, admm.state(), budget,
                                   converged, cfg.zero_tol);
  res.trace = std::move(trace);
  return res;
}

GInverseResult admm20_solve(const SpectralFactors& f, const AdmmConfig& cfg,
                            Index gamma) {
  validate(cfg);
  if (gamma < f.rank) {
    throw InvalidArgument("admm20: gamma = " + std::to_string(gamma) +
                          " is below rank " + std::to_string(f.rank));
  }
  const Budget budget(cfg);
  ReducedAdmm admm(f, ReducedAdmm::EStep::project, cfg.rho, gamma, cfg.threads);

  AdmmState init;
  init.rho = cfg.rho;
  init.lambda = DenseMatrix::Zero(f.cols(), f.rank);
  init.e = f.v1_dinv();
  admm.reset(std::move(init));

  std::vector<double> trace;
  bool converged = false;
  while (!budget.exhausted(admm.state().iter)) {
    admm.step();
    if (cfg.record_trace)
      trace.push_back(static_cast<double>(
          count_nonzero_rows(admm.k_matrix(), cfg.zero_tol)));
    converged = count_nonzero_rows(admm.k_matrix(), cfg.zero_tol) <= gamma;
    if (converged) break;
  }
  GInverseResult res = make_result(f, Method::admm20, admm.state(), budget,
                                   converged, cfg.zero_tol);
  res.gamma = gamma;
  res.trace = std::move(trace);
  return res;
}

GInverseResult admm2120_solve(const SpectralFactors& f, const AdmmConfig& cfg,
                              Index gamma, const GInverseResult& warm) {
  validate(cfg);
  if (gamma < f.rank) {
    throw InvalidArgument("admm2120: gamma = " + std::to_string(gamma) +
                          " is below rank " + std::to_string(f.rank));
  }
  if (!warm.state || warm.method != Method::admm21)
    throw InvalidArgument("admm2120: warm start must be an admm21 result");

  const Budget budget(cfg);
  const RhoSchedule& sched = cfg.rho_schedule;
  ReducedAdmm admm(f, ReducedAdmm::EStep::capped_shrink, sched.initial, gamma,
                   cfg.threads);
  AdmmState init = *warm.state;
  init.iter = 0;
  admm.reset(std::move(init));
  admm.set_rho(sched.initial);

  bool decaying = false;
  double alpha = sched.alpha_max;
  double previous_rho = admm.rho();

  std::vector<double> trace;
  bool converged = false;
  while (!budget.exhausted(admm.state().iter)) {
    admm.step();
    if (cfg.record_trace) trace.push_back(norm21(admm.state().e));
    const bool feasible =
        count_nonzero_rows(admm.k_matrix(), cfg.zero_tol) <= gamma;
    converged = feasible && reduced_stop(admm, cfg);
    if (converged) break;

    const bool small_residual = admm.state().primal_res < sched.primal_gate;
    if (!decaying) {
      decaying = feasible && small_residual;
      continue;
    }
    if (small_residual) {
      previous_rho = admm.rho();
      admm.set_rho(admm.rho() / alpha);
    } else {
      alpha = std::max(sched.alpha_min, alpha * sched.alpha_decay);
      admm.set_rho(previous_rho);
    }
  }
  GInverseResult res = make_result(f, Method::admm2120, admm.state(), budget,
                                   converged, cfg.zero_tol);
  res.gamma = gamma;
  res.trace = std::move(trace);
  return res;
}

}  // namespace ginv
