// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file measure.hpp
 * @brief Shot allocation and analytic estimator statistics for the
 *        basis-rotation measurement scheme.
 */

#pragma once

#include <string>
#include <vector>

#include "dfkit/lcu.hpp"
#include "dfkit/reference.hpp"

namespace dfkit {

enum class Scheme { Uniform, Weights, Explicit };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);  ///< PreconditionError on unknown names

struct MeasurementPlan {
  Scheme scheme = Scheme::Uniform;
  long long shots_total = 0;
  std::vector<long long> shots_per_basis;
  std::vector<double> weights;
};

struct EstimatorStats {
  double exact = 0.0;     ///< reference expectation value
  double estimate = 0.0;  ///< constant + sum of block means
  double bias = 0.0;      ///< exact - estimate
  double variance = 0.0;
  double rmse = 0.0;
  std::vector<double> per_basis_variance;  ///< single-shot variances
  std::vector<double> per_basis_mean;
  std::vector<long long> shots_per_basis;
};

/// sqrt(sum linear^2 + sum_{i<j} (2 quadratic_ij)^2); Z_i Z_j and Z_j Z_i
/// are the same Pauli term.
double basis_weight(const MeasurementBasis& block);
std::vector<double> basis_weights(const PauliHamiltonian& h);

/// Proportional split with largest-remainder rounding, ties to the lower index.
std::vector<long long> largest_remainder(const std::vector<double>& weights, long long shots_total);

/// Uniform or weight-proportional plan. Under the weights scheme every block
/// with nonzero weight receives at least one shot. `explicit_shots` is
/// validated and passed through for Scheme::Explicit.
MeasurementPlan allocate(const PauliHamiltonian& h, Scheme scheme, long long shots_total,
                         const std::vector<long long>& explicit_shots = {});

/// Integer minimizer of sum v_b / M_b at fixed total: sqrt(v) proportional
/// split, then single-shot exchanges until none lowers the total.
std::vector<long long> optimal_allocation(const std::vector<double>& variances, long long shots_total);

/// Exact per-block moments of `psi` after rotating into each block's basis.
std::vector<Moments> basis_moments(const PauliHamiltonian& h, const FockState& psi);

/// Combines per-block moments with a plan. Throws PlanError for a block
/// with variance above 1e-12 and no shots.
EstimatorStats combine(double constant, const std::vector<Moments>& moments, const std::vector<long long>& shots,
                       double exact);

EstimatorStats estimator_stats(const PauliHamiltonian& h, const FockState& psi, const MeasurementPlan& plan,
                               double exact);
EstimatorStats estimator_stats(const IntegralSet& set, const PauliHamiltonian& h, const FockState& psi,
                               const MeasurementPlan& plan);

/// Singlet-triplet gap: bias = exact_gap - (E'_T - E'_S), variance = Var_S + Var_T.
EstimatorStats gap_stats(const PauliHamiltonian& h, const FockState& singlet, const FockState& triplet,
                         const MeasurementPlan& plan_s, const MeasurementPlan& plan_t, double exact_gap);

/// Smallest total shot count whose plan under `scheme` reaches rmse <= epsilon.
/// Throws UnreachableError when |bias| >= epsilon.
long long shots_to_target(const PauliHamiltonian& h, const std::vector<Moments>& moments, double exact, Scheme scheme,
                          double epsilon);
long long shots_to_target(const PauliHamiltonian& h, const FockState& psi, double exact, Scheme scheme,
                          double epsilon);

}  // namespace dfkit
