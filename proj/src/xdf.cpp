// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/xdf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "dfkit/errors.hpp"
#include "dfkit/lcu.hpp"
#include "dfkit/linalg.hpp"

namespace dfkit {

namespace {

constexpr double kRelativeCutoff = 1e-12;
constexpr double kMaxVAsymmetry = 1e-6;

struct OuterPair {
  double g;
  Vec v;
};

// Outer eigenpairs sorted by descending |g|, ties broken lexicographically.
std::vector<OuterPair> outer_eigenpairs(const Mat& eri) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (eri + eri.transpose()));
  const auto m = eri.rows();
  std::vector<OuterPair> pairs;
  pairs.reserve(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Vec v = es.eigenvectors().col(k);
    normalize_sign(v);
    pairs.push_back({es.eigenvalues()(k), std::move(v)});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const OuterPair& a, const OuterPair& b) { return std::abs(a.g) > std::abs(b.g); });

  // Within groups of numerically equal |g|: positive first, then lexicographic.
  const double tol = 1e-10 * (m ? std::max(std::abs(pairs.front().g), 1e-300) : 1.0);
  auto tie_break = [](const OuterPair& a, const OuterPair& b) {
    if ((a.g > 0) != (b.g > 0)) return a.g > 0;
    for (Eigen::Index r = 0; r < a.v.size(); ++r) {
      if (a.v(r) != b.v(r)) return a.v(r) > b.v(r);
    }
    return false;
  };
  for (std::size_t begin = 0; begin < pairs.size();) {
    std::size_t end = begin + 1;
    while (end < pairs.size() && std::abs(pairs[end - 1].g) - std::abs(pairs[end].g) <= tol) ++end;
    std::stable_sort(pairs.begin() + begin, pairs.begin() + end, tie_break);
    begin = end;
  }
  return pairs;
}

}  // namespace

Mat modified_one_body(const IntegralSet& set) {
  const int n = set.n;
  Mat f = set.h_one;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      double acc = 0.0;
      for (int r = 0; r < n; ++r) acc += -0.5 * set.two(p, r, q, r) + set.two(p, q, r, r);
      f(p, q) += acc;
    }
  return f;
}

OneBodyFactor build_one_body_factor(const IntegralSet& set) {
  if (const auto issues = validate(set, 1e-8); !issues.empty()) {
    throw PreconditionError("integral set is not symmetric: " + issues.front());
  }
  OneBodyFactor out;
  out.f_matrix = modified_one_body(set);
  out.f_matrix = 0.5 * (out.f_matrix + out.f_matrix.transpose());
  auto eig = sym_eig(out.f_matrix);
  make_special_orthogonal(eig.vectors, eig.values);
  out.u0 = std::move(eig.vectors);
  out.f_eigs = std::move(eig.values);
  return out;
}

DFRepresentation xdf_factorize(const IntegralSet& set, std::optional<double> eig_cutoff) {
  if (eig_cutoff && *eig_cutoff < 0) throw PreconditionError("eig_cutoff must be non-negative");
  const int n = set.n;
  DFRepresentation rep;
  rep.n = n;

  const auto pairs = outer_eigenpairs(set.eri);
  const double g_max = pairs.empty() ? 0.0 : std::abs(pairs.front().g);
  const double cutoff = eig_cutoff.value_or(kRelativeCutoff * g_max);

  for (const auto& [g, vec] : pairs) {
    if (!(std::abs(g) > cutoff)) break;
    Mat v = Eigen::Map<const Mat>(vec.data(), n, n).transpose();  // v(p, q) = vec(p * n + q)
    const double asym = asymmetry(v);
    if (asym > kMaxVAsymmetry) {
      throw SymmetryError("outer eigenvector " + std::to_string(rep.leaves.size()) +
                              " is not symmetric; the two-electron tensor lacks 8-fold symmetry",
                          asym);
    }
    auto inner = sym_eig(0.5 * (v + v.transpose()));
    make_special_orthogonal(inner.vectors, inner.values);
    DFLeaf leaf;
    leaf.u = std::move(inner.vectors);
    leaf.z = g * inner.values * inner.values.transpose();
    leaf.origin = XdfOrigin{g, std::move(v), asym};
    rep.leaves.push_back(std::move(leaf));
  }

  rep.one_body = build_one_body_factor(set);
  rep.offset = scalar_offset(set);
  return rep;
}

DFRepresentation truncate(const DFRepresentation& rep, int n_t) {
  if (n_t < 0 || n_t > rep.n_t()) {
    throw BoundsError("cannot truncate " + std::to_string(rep.n_t()) + " leaves to " + std::to_string(n_t));
  }
  DFRepresentation out = rep;
  out.leaves.resize(n_t);
  return out;
}

}  // namespace dfkit
