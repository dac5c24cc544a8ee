// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file lcu.hpp
 * @brief Pauli/LCU form of a double-factorized Hamiltonian and its lambda
 *        parameters.
 *
 * Qubit 2k is spin-up orbital k, qubit 2k+1 spin-down orbital k. Every
 * measurement basis is an orbital rotation followed by Z measurements; in that
 * basis the block is f(z) = linear . z + z^T quadratic z with z_i = +-1.
 */

#pragma once

#include <vector>

#include "dfkit/integrals.hpp"
#include "dfkit/xdf.hpp"

namespace dfkit {

struct MeasurementBasis {
  Mat rotation;   ///< n x n orthogonal
  Vec linear;     ///< 2n coefficients of single Z terms
  Mat quadratic;  ///< 2n x 2n symmetric, zero diagonal
};

struct PauliHamiltonian {
  int n = 0;
  double constant = 0.0;
  std::vector<MeasurementBasis> bases;  ///< bases[0] is the one-body block
};

/// State-independent constant of the factorized Hamiltonian:
/// E_c + sum_p h_pp + 1/2 sum_pq (pp|qq) - 1/4 sum_pq (pq|pq).
double scalar_offset(const IntegralSet& set);

/// Two-body block of a single leaf (no linear terms).
MeasurementBasis leaf_block(const DFLeaf& leaf);

PauliHamiltonian build_pauli_hamiltonian(const DFRepresentation& rep);

/// Model two-electron tensor of the leaves, grouped n^2 x n^2.
Mat reconstruct_eri(const DFRepresentation& rep);
Mat reconstruct_eri(int n, const std::vector<DFLeaf>& leaves);

/// Frobenius norm of reconstruct_eri(rep) - eri.
double frobenius_error(const DFRepresentation& rep, const Mat& eri);

/// Principal square root W of a symmetric matrix with W W^T = z. Negative
/// eigenvalues give an imaginary part.
struct LeafSqrt {
  Mat re;
  Mat im;
  Eigen::MatrixXcd complex() const;
};
LeafSqrt leaf_sqrt(const Mat& z);

struct LambdaReport {
  double lambda_lcu = 0.0;
  double lambda_burg = 0.0;
  double one_body_part = 0.0;  ///< sum_k |F_k|
  std::vector<double> per_leaf_lcu;
  std::vector<double> per_leaf_burg;
};

/// sum_k |F_k| + sum_t (sum_{k<l} |Z_kl| + 1/4 sum_k |Z_kk|); fills the LCU fields.
double lambda_lcu(const DFRepresentation& rep, LambdaReport* report = nullptr);

/// sum_k |F_k| + 1/4 sum_t sum_i (sum_k |W_ki|)^2; fills the Burg fields.
double lambda_burg(const DFRepresentation& rep, LambdaReport* report = nullptr);

LambdaReport lambda_report(const DFRepresentation& rep);

/// Eigenvalue-route sum-of-squares factorization with per-coefficient
/// screening of lambda^t_k = sqrt(|g_t|) Lambda_k.
struct CholeskyDF {
  int rank = 0;             ///< leaves with at least one surviving coefficient
  double frob_error = 0.0;  ///< of the screened reconstruction
  double lambda = 0.0;      ///< sum_k |F_k| + 1/4 sum_t ||L^t||_1^2
};
CholeskyDF cholesky_df_lambda(const IntegralSet& set, double threshold);

}  // namespace dfkit
