// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace dfkit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;

/// Symmetric eigendecomposition with reproducible conventions.
struct SymEig {
  Vec values;   ///< descending by value
  Mat vectors;  ///< columns; largest-magnitude component of each made positive
};

/// Eigenpairs sorted descending by value. Near-degenerate pairs (within
/// `degeneracy_tol` relative to the spectral scale) are ordered by
/// lexicographically descending eigenvector entries.
SymEig sym_eig(const Mat& a, double degeneracy_tol = 1e-10);

/// Makes the largest-magnitude entry of v positive (first one on ties).
void normalize_sign(Eigen::Ref<Vec> v);

/// If det(u) < 0, negates the column whose paired value has the smallest
/// magnitude. Returns true if a column was flipped.
bool make_special_orthogonal(Mat& u, const Vec& paired_values);

double max_abs(const Mat& m);
double asymmetry(const Mat& m);  ///< max |m - m^T|
double orthogonality_error(const Mat& u);  ///< max |u^T u - I|

/// exp(x) for antisymmetric x, through the spectrum of the Hermitian i*x.
Mat expm_antisymmetric(const Mat& x);

/// Principal real logarithm of an orthogonal matrix with det +1; result is
/// exactly antisymmetric. Rotation angles of pi map to +pi.
Mat logm_special_orthogonal(const Mat& u);

/// Pulls a gradient back through U = exp(X).
///
/// Given G = dC/dU (same shape as X), returns H with H_ab = dC/dX_ab treating
/// every entry of X as independent; uses the divided-difference form of the
/// exponential's Frechet derivative on the eigenbasis of X.
Mat dexp_adjoint(const Mat& x, const Mat& g);

/// Directional derivative d/ds exp(X + sE) at s = 0.
Mat dexp(const Mat& x, const Mat& e);

}  // namespace dfkit
