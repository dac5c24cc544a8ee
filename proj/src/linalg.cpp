// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dfkit/errors.hpp"

namespace dfkit {

namespace {

using cplx = std::complex<double>;

struct HermitianSpectrum {
  CMat w;   // unitary eigenvectors of i*X
  Vec mu;   // real eigenvalues of i*X; X has eigenvalues -i*mu
};

HermitianSpectrum antisymmetric_spectrum(const Mat& x) {
  const CMat h = cplx(0.0, 1.0) * x.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  return {es.eigenvectors(), es.eigenvalues()};
}

// Divided differences of exp on the spectrum {-i mu_k}.
CMat exp_divided_differences(const Vec& mu) {
  const auto n = mu.size();
  CMat phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double half = 0.5 * (mu(i) - mu(j));
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      phi(i, j) = std::exp(cplx(0.0, -0.5 * (mu(i) + mu(j)))) * sinc;
    }
  return phi;
}

}  // namespace

void normalize_sign(Eigen::Ref<Vec> v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-12)) best = i;
  }
  if (v(best) < 0) v = -v;
}

SymEig sym_eig(const Mat& a, double degeneracy_tol) {
  const auto n = a.rows();
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  Vec values = es.eigenvalues();
  Mat vectors = es.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) normalize_sign(vectors.col(k));

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return values(i) > values(j); });

  const double scale = n ? std::max(values.cwiseAbs().maxCoeff(), 1e-300) : 1.0;
  auto lex_greater = [&](Eigen::Index i, Eigen::Index j) {
    for (Eigen::Index r = 0; r < n; ++r) {
      if (vectors(r, i) != vectors(r, j)) return vectors(r, i) > vectors(r, j);
    }
    return false;
  };
  for (Eigen::Index begin = 0; begin < n;) {
    Eigen::Index end = begin + 1;
    while (end < n && values(order[end - 1]) - values(order[end]) <= degeneracy_tol * scale) ++end;
    std::stable_sort(order.begin() + begin, order.begin() + end, lex_greater);
    begin = end;
  }

  SymEig out{Vec(n), Mat(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = values(order[k]);
    out.vectors.col(k) = vectors.col(order[k]);
  }
  return out;
}

bool make_special_orthogonal(Mat& u, const Vec& paired_values) {
  if (u.rows() == 0 || u.determinant() > 0) return false;
  Eigen::Index smallest = 0;
  for (Eigen::Index k = 1; k < paired_values.size(); ++k) {
    if (std::abs(paired_values(k)) < std::abs(paired_values(smallest))) smallest = k;
  }
  u.col(smallest) *= -1.0;
  return true;
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double asymmetry(const Mat& m) { return max_abs(m - m.transpose()); }

double orthogonality_error(const Mat& u) {
  return max_abs(u.transpose() * u - Mat::Identity(u.cols(), u.cols()));
}

Mat expm_antisymmetric(const Mat& x) {
  if (x.size() == 0) return x;
  const auto [w, mu] = antisymmetric_spectrum(x);
  CMat d = CMat::Zero(mu.size(), mu.size());
  for (Eigen::Index k = 0; k < mu.size(); ++k) d(k, k) = std::exp(cplx(0.0, -mu(k)));
  return (w * d * w.adjoint()).real();
}

Mat dexp(const Mat& x, const Mat& e) {
  const auto [w, mu] = antisymmetric_spectrum(x);
  const CMat phi = exp_divided_differences(mu);
  const CMat inner = (w.adjoint() * e.cast<cplx>() * w).cwiseProduct(phi);
  return (w * inner * w.adjoint()).real();
}

Mat dexp_adjoint(const Mat& x, const Mat& g) {
  const auto [w, mu] = antisymmetric_spectrum(x);
  const CMat phi = exp_divided_differences(mu);
  const CMat k = (w.transpose() * g.cast<cplx>() * w.conjugate()).cwiseProduct(phi);
  return (w.conjugate() * k * w.transpose()).real();
}

Mat logm_special_orthogonal(const Mat& u) {
  const auto n = u.rows();
  if (n == 0) return u;
  if (orthogonality_error(u) > 1e-8) throw PreconditionError("logm: matrix is not orthogonal");
  // S and A commute, so A acts within each eigenspace of S, where u is a
  // rotation by theta = acos(c) and log u = theta / sin(theta) * A.
  const Mat sym = 0.5 * (u + u.transpose());
  const Mat skew = 0.5 * (u - u.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym);
  const Vec& c = es.eigenvalues();
  const Mat& v = es.eigenvectors();

  Mat x = Mat::Zero(n, n);
  for (Eigen::Index begin = 0; begin < n;) {
    Eigen::Index end = begin + 1;
    while (end < n && c(end) - c(end - 1) <= 1e-9) ++end;
    const Mat basis = v.middleCols(begin, end - begin);
    const double cm = std::clamp(c.segment(begin, end - begin).mean(), -1.0, 1.0);
    if (1.0 + cm > 1e-14) {
      const double theta = std::acos(cm);
      const double factor = theta < 1e-8 ? 1.0 : theta / std::sin(theta);
      x += factor * basis * (basis.transpose() * skew * basis) * basis.transpose();
    } else {
      if ((end - begin) % 2 != 0) throw PreconditionError("logm: determinant is -1");
      for (Eigen::Index k = 0; k + 1 < basis.cols(); k += 2) {
        x += std::numbers::pi * (basis.col(k + 1) * basis.col(k).transpose() - basis.col(k) * basis.col(k + 1).transpose());
      }
    }
    begin = end;
  }
  return 0.5 * (x - x.transpose());
}

}  // namespace dfkit
