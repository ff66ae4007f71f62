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

// ADMM solvers over the family H = V1 D^-1 U1^T + V2 Z U1^T of ah-symmetric
// reflexive generalized inverses.
//
//   admm1_solve     min ||H||_1                     (full n x m splitting)
//   admm21_solve    min ||H||_{2,1}                 (reduced n x r splitting)
//   admm20_solve    find ||H||_{2,0} <= gamma       (projection E-step)
//   admm2120_solve  min ||H||_{2,1} s.t. ||H||_{2,0} <= gamma
//
// Every solver works on precomputed SpectralFactors, so P1-P3 and the
// linearized reflexivity hold by construction for any Z. All multipliers are
// scaled (Lambda = Theta / rho).

#ifndef GINV_ADMM_HPP_
#define GINV_ADMM_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ginv/matrix_core.hpp"

namespace ginv {

enum class Method { admm1, admm21, admm20, admm2120, ls, ls21, rank1, rank2 };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

// Penalty schedule of the constrained 2,1 solver: hold `initial` until the
// iterate is row-feasible with primal residual below `primal_gate`, then
// divide rho by alpha each iteration while the residual stays below the
// gate. On a violation rho is restored and alpha := max(alpha_min,
// alpha * alpha_decay).
struct RhoSchedule {
  double initial = 1e4;
  double primal_gate = 1e-4;
  double alpha_max = 2.0;
  double alpha_min = 1.0;
  double alpha_decay = 0.9;
};

struct AdmmConfig {
  double rho = 1.0;
  double eps_abs = 1e-7;
  double eps_rel = 1e-7;
  // When set, stop on ||r||_F <= eps and ||s||_F <= eps instead.
  std::optional<double> fixed_eps;
  double max_seconds = 7200.0;
  std::optional<long> max_iters;
  double omega = 0.8;
  std::optional<Index> gamma;
  RhoSchedule rho_schedule;
  double zero_tol = kDefaultZeroTol;
  int threads = 1;
  // Keep the per-iteration objective of E in GInverseResult::trace.
  bool record_trace = false;

  static AdmmConfig admm1_defaults();
  static AdmmConfig admm21_defaults();
  static AdmmConfig admm20_defaults();
  static AdmmConfig admm2120_defaults();
};

// Throws InvalidArgument on nonpositive rho/tolerances, omega outside (0,1),
// or an inconsistent schedule.
void validate(const AdmmConfig& cfg);

struct AdmmState {
  DenseMatrix z;       // (n - r) x r
  DenseMatrix e;       // n x m (ADMM1) or n x r
  DenseMatrix lambda;  // same shape as e
  long iter = 0;
  double primal_res = 0.0;  // ||r^k||_F
  double dual_res = 0.0;    // ||s^k||_F
  double rho = 1.0;         // penalty the multiplier is scaled by
};

struct GInverseResult {
  DenseMatrix h;
  Method method = Method::admm21;
  NormReport norms;
  PropertyReport properties;
  long iters = 0;
  double seconds = 0.0;
  bool converged = false;
  Index gamma = 0;                 // row budget, admm20 / admm2120 only
  IndexList columns;               // column set T of column-block results
  std::optional<AdmmState> state;  // final ADMM iterate
  std::vector<double> trace;       // objective of E per iteration
};

// Fills norms and properties of a result whose h is set.
void finalize(const SpectralFactors& f, double zero_tol, GInverseResult& res);

// --- proximal and projection kernels -------------------------------------

// S_kappa(a): a - kappa, 0 or a + kappa.
double soft_threshold(double a, double kappa);

// Entrywise soft threshold at 1/rho: the prox of ||.||_1.
DenseMatrix soft_threshold(const DenseMatrix& y, double rho, int threads = 1);

// Row-wise shrinkage at 1/rho: the prox of ||.||_{2,1}.
DenseMatrix row_shrink(const DenseMatrix& y, double rho, int threads = 1);

// Keeps the gamma rows of largest 2-norm (ties: lower index) and zeroes
// the others.
DenseMatrix project_row_support(const DenseMatrix& y, Index gamma,
                                int threads = 1);

// Global minimizer of ||E||_{2,1} + rho/2 ||E - Y||_F^2 subject to
// ||E||_{2,0} <= gamma: shrink the gamma largest-norm rows, zero the rest.
DenseMatrix row_shrink_capped(const DenseMatrix& y, double rho, Index gamma,
                              int threads = 1);

// argmin_Z ||J - V2 Z U1^T||_F (project_u1) or ||J - V2 Z||_F.
DenseMatrix z_update(const DenseMatrix& j, const SpectralFactors& f,
                     bool project_u1, int threads = 1);

// max(r, floor(omega * r + (1 - omega) * n20_opt)).
Index gamma_from_omega(Index r, Index n20_opt, double omega);

// --- single-iteration drivers --------------------------------------------

// One ADMM pass of the reduced n x r splitting E = V1 D^-1 + V2 Z, with the
// E-step chosen by `kind`.
class ReducedAdmm {
 public:
  enum class EStep { shrink, project, capped_shrink };

  ReducedAdmm(const SpectralFactors& f, EStep kind, double rho, Index gamma,
              int threads);

  // Installs E and Lambda (scaled by state.rho); Z is recomputed by step().
  void reset(AdmmState state);
  void step();

  // Changes the penalty. The multiplier is rescaled so Theta is unchanged.
  void set_rho(double rho);
  double rho() const { return state_.rho; }

  const AdmmState& state() const { return state_; }
  // r^k = V1 D^-1 + V2 Z^k - E^k of the last step.
  const DenseMatrix& residual() const { return residual_; }
  // V1 D^-1 + V2 Z^k.
  const DenseMatrix& k_matrix() const { return k_; }

  bool dynamic_stop(double eps_abs, double eps_rel) const;
  bool fixed_stop(double eps) const;

 private:
  const SpectralFactors& f_;
  EStep kind_;
  Index gamma_;
  int threads_;
  DenseMatrix k0_;  // V1 D^-1
  AdmmState state_;
  DenseMatrix k_, residual_, work_, v2z_, proj_;
  double v2t_lambda_norm_ = 0.0;
};

// One ADMM pass of the full n x m splitting E = V1 D^-1 U1^T + V2 Z U1^T
// with the entrywise soft-threshold E-step.
class FullAdmm {
 public:
  FullAdmm(const SpectralFactors& f, double rho, int threads);

  void reset(AdmmState state);
  void step();

  const AdmmState& state() const { return state_; }
  const DenseMatrix& residual() const { return residual_; }

  bool dynamic_stop(double eps_abs, double eps_rel) const;
  bool fixed_stop(double eps) const;

  // V1 D^-1 U1^T.
  const DenseMatrix& h0() const { return h0_; }

 private:
  const SpectralFactors& f_;
  int threads_;
  DenseMatrix h0_;
  AdmmState state_;
  DenseMatrix v2zu_, residual_, work_, tmp_, small_;
  double v2t_lambda_u1_norm_ = 0.0;
};

// --- solvers ---------------------------------------------------------------

// Budget exhaustion returns the last iterate with converged == false.
GInverseResult admm1_solve(const SpectralFactors& f, const AdmmConfig& cfg);
GInverseResult admm21_solve(const SpectralFactors& f, const AdmmConfig& cfg);

// Throws InvalidArgument when gamma < rank.
GInverseResult admm20_solve(const SpectralFactors& f, const AdmmConfig& cfg,
                            Index gamma);

// `warm` must be an admm21_solve result (it carries the final iterate).
GInverseResult admm2120_solve(const SpectralFactors& f, const AdmmConfig& cfg,
                              Index gamma, const GInverseResult& warm);

}  // namespace ginv

#endif  // GINV_ADMM_HPP_
