// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file xdf.hpp
 * @brief Explicit double factorization of the electronic Hamiltonian.
 *
 * The one-body part is diagonalized after folding in the two-electron
 * contributions that arise from normal ordering; the two-electron tensor is
 * diagonalized over grouped (pq),(rs) indices and each symmetric eigen-matrix
 * is diagonalized again, giving one orbital rotation U^t and a rank-one
 * coefficient matrix Z^t per leaf.
 */

#pragma once

#include <optional>
#include <vector>

#include "dfkit/integrals.hpp"

namespace dfkit {

struct OneBodyFactor {
  Mat f_matrix;  ///< h - 1/2 sum_r (pr|qr) + sum_r (pq|rr)
  Mat u0;        ///< special orthogonal, columns are eigenvectors
  Vec f_eigs;    ///< descending
};

/// Provenance of a leaf produced by exact factorization.
struct XdfOrigin {
  double g = 0.0;          ///< outer eigenvalue
  Mat v;                   ///< matricized outer eigenvector, as computed
  double v_asymmetry = 0;  ///< max |V - V^T| before symmetrization
};

struct DFLeaf {
  Mat u;  ///< n x n special orthogonal
  Mat z;  ///< n x n symmetric
  std::optional<XdfOrigin> origin;
};

struct DFRepresentation {
  int n = 0;
  OneBodyFactor one_body;
  std::vector<DFLeaf> leaves;
  double offset = 0.0;  ///< state-independent constant, from the exact integrals

  int n_t() const { return static_cast<int>(leaves.size()); }
};

/// Modified one-electron tensor of the factorized Hamiltonian.
Mat modified_one_body(const IntegralSet& set);

/// Throws PreconditionError if `set` fails validate() at 1e-8.
OneBodyFactor build_one_body_factor(const IntegralSet& set);

/// Exact factorization. Eigenvalues with |g| <= eig_cutoff are discarded;
/// the default cutoff is 1e-12 * max|g|. Leaves are ordered by descending |g|.
DFRepresentation xdf_factorize(const IntegralSet& set, std::optional<double> eig_cutoff = std::nullopt);

/// Keeps the first n_t leaves; one-body factor and offset are unchanged.
DFRepresentation truncate(const DFRepresentation& rep, int n_t);

/// Largest leaf count an 8-fold-symmetric tensor can need.
constexpr int max_leaf_count(int n) { return n * (n + 1) / 2; }

}  // namespace dfkit
