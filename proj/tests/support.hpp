// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfkit/integrals.hpp"
#include "dfkit/linalg.hpp"

namespace dfkit::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(DFKIT_TEST_DATA) / name;
}

inline Mat random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Mat random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  const Mat m = random_matrix(n, n, rng, scale);
  return 0.5 * (m + m.transpose());
}

inline Mat random_antisymmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  const Mat m = random_matrix(n, n, rng, scale);
  return 0.5 * (m - m.transpose());
}

inline Mat random_rotation(int n, std::mt19937_64& rng) {
  return expm_antisymmetric(random_antisymmetric(n, rng, 2.0));
}

/// Annihilation operator on qubit j of a 2n-qubit register, built bit by bit
/// with the (-1)^(occupied qubits below j) string.
inline Mat jw_annihilation(int n_qubits, int j) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  Mat a = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (!((b >> j) & 1)) continue;
    int below = 0;
    for (int k = 0; k < j; ++k) below += static_cast<int>((b >> k) & 1);
    a(static_cast<Eigen::Index>(b ^ (std::uint64_t{1} << j)), static_cast<Eigen::Index>(b)) = (below % 2) ? -1.0 : 1.0;
  }
  return a;
}

/// Dense second-quantized Hamiltonian assembled term by term from ladder
/// operators; independent of the library's own dense builders.
inline Mat jw_oracle(const IntegralSet& set) {
  const int n = set.n;
  const int q = 2 * n;
  std::vector<Mat> a;
  for (int j = 0; j < q; ++j) a.push_back(jw_annihilation(q, j));
  const auto dim = a[0].rows();
  Mat h = set.e_core * Mat::Identity(dim, dim);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < 2; ++s) h += set.h_one(p, r) * a[2 * p + s].transpose() * a[2 * r + s];
  for (int p = 0; p < n; ++p)
    for (int qq = 0; qq < n; ++qq)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = set.two(p, qq, r, s);
          if (v == 0.0) continue;
          for (int sig = 0; sig < 2; ++sig)
            for (int tau = 0; tau < 2; ++tau)
              h += 0.5 * v * a[2 * p + sig].transpose() * a[2 * r + tau].transpose() * a[2 * s + tau] * a[2 * qq + sig];
        }
  return h;
}

}  // namespace dfkit::testing
