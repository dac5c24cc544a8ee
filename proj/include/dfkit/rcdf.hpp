// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rcdf.hpp
 * @brief Regularized compressed double factorization.
 *
 * Refits n_t leaves {U^t, Z^t} to the two-electron tensor by alternating
 * L-BFGS on the rotation generators X^t (U^t = exp(X^t)) with an exact solve
 * for Z at fixed rotations. The cost is
 *
 *     C(X, Z) = 1/2 ||Delta||_F^2 + sum_tkl rho_tkl |Z^t_kl|^gamma,
 *
 * where Delta is the grouped n^2 x n^2 residual of the model against eri.
 */

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dfkit/integrals.hpp"
#include "dfkit/lbfgs.hpp"
#include "dfkit/xdf.hpp"

namespace dfkit {

struct RegularizationConfig {
  int gamma = 2;             ///< 1 (L1) or 2 (L2)
  double rho = 0.0;          ///< uniform weight, used when `rho_tensor` is empty
  std::vector<Mat> rho_tensor;  ///< per-leaf n x n weights

  double weight(int t, int k, int l) const {
    return rho_tensor.empty() ? rho : rho_tensor[static_cast<std::size_t>(t)](k, l);
  }
  Mat weights(int t, int n) const;
  bool is_zero() const;

  /// Throws PreconditionError on negative weights, bad gamma, or a tensor
  /// whose shape does not match (n_t, n).
  void validate(int n_t, int n) const;
};

struct CgSettings {
  double rel_tol = 1e-10;  ///< on ||r|| / ||b||
  int max_iters = 5000;
};

struct L1Settings {
  int max_sweeps = 100;
  double sign_tol = 1e-12;  ///< slack when releasing zero entries
};

struct OptimizerConfig {
  int n_t = 1;
  double frob_tol = 1e-6;
  int max_outer_iters = 200;
  double stall_tol = 1e-12;  ///< relative cost decrease per cycle
  LbfgsSettings lbfgs;
  CgSettings cg;
  L1Settings l1;

  /// Throws PreconditionError when a tolerance is non-positive or n_t < 1.
  void validate() const;
};

/// Rotation generators, one antisymmetric matrix per leaf.
struct GeneratorSet {
  std::vector<Mat> x;

  static GeneratorSet from_rotations(const std::vector<Mat>& u);
  std::vector<Mat> rotations() const;
};

/// Model minus eri, grouped n^2 x n^2.
Mat residual(const std::vector<Mat>& u, const std::vector<Mat>& z, const Mat& eri);

double penalty(const std::vector<Mat>& z, const RegularizationConfig& reg);

double cost(const std::vector<Mat>& u, const std::vector<Mat>& z, const Mat& eri, const RegularizationConfig& reg);

/// dC/dU^t, each entry of U treated as independent.
std::vector<Mat> grad_u(const std::vector<Mat>& u, const std::vector<Mat>& z, const Mat& delta);

/// Antisymmetric G^t with G^t_pq = dC/dx_pq for X^t = sum_{p<q} x_pq (E_pq - E_qp).
std::vector<Mat> grad_x(const GeneratorSet& x, const std::vector<Mat>& u, const std::vector<Mat>& z,
                        const Mat& delta);

/// dC/dZ^t with each entry of Z independent; sign(0) := 0 for gamma = 1.
std::vector<Mat> grad_z(const std::vector<Mat>& u, const std::vector<Mat>& z, const Mat& delta,
                        const RegularizationConfig& reg);

struct ZSolve {
  std::vector<Mat> z;
  int cg_iters = 0;
  double rel_residual = 0.0;
  int sweeps = 0;  ///< sign-pattern sweeps (L1 only)
};

/// Minimizer of the gamma = 2 cost at fixed U. Throws ConvergenceError when
/// CG does not reach the tolerance.
ZSolve solve_z_l2(const std::vector<Mat>& u, const Mat& eri, const RegularizationConfig& reg, const CgSettings& cg);

/// Minimizer of the gamma = 1 cost at fixed U, by sign-pattern fixed point
/// started from `current_z`. Throws ConvergenceError when the pattern does not
/// settle within `l1.max_sweeps`.
ZSolve solve_z_l1(const std::vector<Mat>& u, const Mat& eri, const RegularizationConfig& reg,
                  const std::vector<Mat>& current_z, const CgSettings& cg, const L1Settings& l1);

struct TraceRecord {
  int cycle = 0;
  double cost = 0.0;
  double frob_error = 0.0;
  double penalty = 0.0;
  int cg_iters = 0;
  int lbfgs_iters = 0;
};

using TraceSink = std::function<void(const TraceRecord&)>;

struct RcdfResult {
  DFRepresentation rep;
  bool converged = false;  ///< frob_tol reached
  bool stalled = false;    ///< stopped on the stall test before frob_tol
  int cycles = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double frob_error = 0.0;
};

/// Two-step optimization from `init`, which must hold exactly opt.n_t leaves.
/// Returns the lowest-cost iterate; one-body factor and offset are copied
/// from `init`.
RcdfResult rcdf_optimize(const IntegralSet& set, const DFRepresentation& init, const RegularizationConfig& reg,
                         const OptimizerConfig& opt, const TraceSink& sink = {});

/// Full X-DF plus a weight tensor that is `rho_base` on the first n_t leaves
/// and `rho_high` on the rest.
struct PenaltyInit {
  DFRepresentation rep;
  RegularizationConfig reg;
};
PenaltyInit high_penalty_truncation_init(const IntegralSet& set, int n_t, double rho_high, double rho_base = 0.0,
                                         int gamma = 2);

/// Removes leaves with ||Z^t||_F < rel_tol * max_t ||Z^t||_F.
DFRepresentation drop_small_leaves(const DFRepresentation& rep, double rel_tol = 1e-8);

}  // namespace dfkit
