// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file integrals.hpp
 * @brief Active-space integral sets: FCIDUMP ingest/emit, symmetry validation,
 *        and random 8-fold-symmetric fixtures.
 *
 * All tensors are 0-based and in chemists' notation (pq|rs). The two-electron
 * tensor is stored grouped as an n^2 x n^2 matrix with pair index p*n+q.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dfkit {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct IntegralSet {
  int n = 0;
  double e_core = 0.0;
  Mat h_one;  ///< n x n one-electron integrals (p|h_c|q)
  Mat eri;    ///< n^2 x n^2, eri(p*n+q, r*n+s) = (pq|rs)

  static IntegralSet zeros(int n);

  double two(int p, int q, int r, int s) const { return eri(p * n + q, r * n + s); }
  double& two(int p, int q, int r, int s) { return eri(p * n + q, r * n + s); }

  /// Assigns `value` to all eight permutations of (pq|rs).
  void set_two_symmetric(int p, int q, int r, int s, double value);
};

/// Header metadata carried alongside the tensors; not part of IntegralSet.
struct FcidumpHeader {
  int norb = 0;
  int nelec = 0;
  int ms2 = 0;
};

struct ParsedFcidump {
  IntegralSet integrals;
  FcidumpHeader header;
};

ParsedFcidump parse_fcidump(std::istream& in);
ParsedFcidump parse_fcidump(const std::string& text);
ParsedFcidump read_fcidump(const std::filesystem::path& path);

/// One line per symmetry-unique nonzero entry, 17 significant digits.
std::string write_fcidump(const IntegralSet& set, const FcidumpHeader& header);

/// Describes every symmetry violation larger than tol * max|tensor|.
/// Two-electron violations are reported once per permutation orbit.
std::vector<std::string> validate(const IntegralSet& set, double tol);

/// Deterministic in `seed`; exactly 8-fold symmetric by construction.
IntegralSet random_symmetric_set(int n, std::uint64_t seed);

/// Integrals in the rotated orbital basis phi'_k = sum_p u_pk phi_p.
IntegralSet rotate_integrals(const IntegralSet& set, const Mat& u);

}  // namespace dfkit
