// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fff.hpp
 * @brief Fluid fermionic fragments: shifting number-operator terms between the
 *        one-body block and the leaves, and choosing the shift to minimize
 *        estimator variance.
 *
 * For coefficients c (n_t x n) the leaf t gains the one-body term
 * U^t diag(d^t) U^t^T with d^t_k = sum_l Z^t_kl + c^t_k, and the one-body
 * block measures C = F - sum_t U^t diag(d^t) U^t^T in its own eigenbasis.
 * The operator, and therefore the constant, does not depend on c.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dfkit/integrals.hpp"
#include "dfkit/lbfgs.hpp"
#include "dfkit/lcu.hpp"
#include "dfkit/measure.hpp"
#include "dfkit/reference.hpp"
#include "dfkit/xdf.hpp"

namespace dfkit {

/// n_t x n; row t holds c^t.
using FFFCoefficients = Mat;

/// Coefficients that reproduce the standard Pauli form.
FFFCoefficients fff_eq6_coefficients(const DFRepresentation& rep);

PauliHamiltonian build_fff_hamiltonian(const IntegralSet& set, const DFRepresentation& rep, const FFFCoefficients& c);

enum class FffInit { Zero, Eq6, Random };

FFFCoefficients fff_initial(const DFRepresentation& rep, FffInit init, std::uint64_t seed = 0);

/// Precomputed state data for fast variance evaluation at any c.
class FffModel {
 public:
  FffModel(const IntegralSet& set, const DFRepresentation& rep, const FockState& psi);

  int n() const { return n_; }
  int n_t() const { return n_t_; }

  /// Single-shot variances of the n_t + 1 blocks; `grad` (optional) receives
  /// d v_b / d c as one n_t x n matrix per block.
  std::vector<double> block_variances(const FFFCoefficients& c, std::vector<Mat>* grad = nullptr) const;

  /// sum_b v_b / m_b with real-valued shot counts, and its gradient.
  double variance(const FFFCoefficients& c, const std::vector<double>& shots, Mat* grad = nullptr) const;

 private:
  struct LeafData {
    Mat u;
    Vec d0;                     // row sums of Z
    std::vector<double> prob;   // outcome probabilities after rotation
    std::vector<double> f0;     // quadratic part per outcome
    Mat y;                      // n x outcomes, z_2k + z_2k+1
  };
  int n_ = 0;
  int n_t_ = 0;
  Mat f_;     // exact modified one-body tensor
  Mat cov_;   // Re <E_pq psi | E_rs psi>, n^2 x n^2
  Vec mean_;  // Re <psi| E_pq |psi>
  std::vector<LeafData> leaves_;

  Mat one_body_matrix(const FFFCoefficients& c) const;
};

struct FffVariance {
  double variance = 0.0;
  Mat gradient;  ///< n_t x n
};

/// Total variance under `plan` and its gradient in c, analytic or by central
/// differences with step `fd_step`.
FffVariance fff_variance(const IntegralSet& set, const DFRepresentation& rep, const FFFCoefficients& c,
                         const FockState& psi, const MeasurementPlan& plan, bool finite_difference = false,
                         double fd_step = 1e-5);

struct FffConfig {
  int max_outer_iters = 50;
  double rel_tol = 1e-10;  ///< on the relative decrease of the optimal variance
  double epsilon = 1e-3;   ///< target standard deviation, Hartree
  LbfgsSettings lbfgs{10, 1e-10, 100};
};

struct FffResult {
  FFFCoefficients c;
  MeasurementPlan plan;
  double shots_to_target = 0.0;   ///< (sum_b sqrt v_b)^2 / epsilon^2
  double initial_shots = 0.0;     ///< same quantity at the initial c
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;      ///< optimal total single-shot variance per outer iteration
};

/// (sum_b sqrt v_b)^2 / epsilon^2 at fixed c.
double fff_shots_to_target(const FffModel& model, const FFFCoefficients& c, double epsilon);

FffResult fff_optimize(const IntegralSet& set, const DFRepresentation& rep, const FFFCoefficients& init,
                       const FockState& psi, long long shots_total, const FffConfig& config = {});

}  // namespace dfkit
