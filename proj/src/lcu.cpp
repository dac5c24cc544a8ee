// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/lcu.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

namespace dfkit {

namespace {

// Columns vec(u_k u_k^T), row index p*n+q.
Mat pair_products(const Mat& u) {
  const auto n = u.rows();
  Mat p(n * n, u.cols());
  for (Eigen::Index k = 0; k < u.cols(); ++k)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) p(a * n + b, k) = u(a, k) * u(b, k);
  return p;
}

}  // namespace

double scalar_offset(const IntegralSet& set) {
  double e = set.e_core;
  for (int p = 0; p < set.n; ++p) {
    e += set.h_one(p, p);
    for (int q = 0; q < set.n; ++q) e += 0.5 * set.two(p, p, q, q) - 0.25 * set.two(p, q, p, q);
  }
  return e;
}

MeasurementBasis leaf_block(const DFLeaf& leaf) {
  const auto n = leaf.z.rows();
  MeasurementBasis b;
  b.rotation = leaf.u;
  b.linear = Vec::Zero(2 * n);
  b.quadratic = Mat::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l) {
      const double w = leaf.z(k, l) / 8.0;
      if (k == l) {
        b.quadratic(2 * k, 2 * k + 1) = w;
        b.quadratic(2 * k + 1, 2 * k) = w;
        continue;
      }
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) b.quadratic(2 * k + s, 2 * l + t) = w;
    }
  return b;
}

PauliHamiltonian build_pauli_hamiltonian(const DFRepresentation& rep) {
  PauliHamiltonian h;
  h.n = rep.n;
  h.constant = rep.offset;
  MeasurementBasis one;
  one.rotation = rep.one_body.u0;
  one.linear = Vec(2 * rep.n);
  for (int k = 0; k < rep.n; ++k) {
    one.linear(2 * k) = -0.5 * rep.one_body.f_eigs(k);
    one.linear(2 * k + 1) = -0.5 * rep.one_body.f_eigs(k);
  }
  one.quadratic = Mat::Zero(2 * rep.n, 2 * rep.n);
  h.bases.push_back(std::move(one));
  for (const auto& leaf : rep.leaves) h.bases.push_back(leaf_block(leaf));
  return h;
}

Mat reconstruct_eri(int n, const std::vector<DFLeaf>& leaves) {
  Mat m = Mat::Zero(n * n, n * n);
  for (const auto& leaf : leaves) {
    const Mat p = pair_products(leaf.u);
    m.noalias() += p * leaf.z * p.transpose();
  }
  return m;
}

Mat reconstruct_eri(const DFRepresentation& rep) { return reconstruct_eri(rep.n, rep.leaves); }

double frobenius_error(const DFRepresentation& rep, const Mat& eri) { return (reconstruct_eri(rep) - eri).norm(); }

Eigen::MatrixXcd LeafSqrt::complex() const {
  Eigen::MatrixXcd w(re.rows(), re.cols());
  w.real() = re;
  w.imag() = im;
  return w;
}

LeafSqrt leaf_sqrt(const Mat& z) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (z + z.transpose()));
  const Mat& v = es.eigenvectors();
  Vec re(z.rows()), im(z.rows());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const auto r = std::sqrt(std::complex<double>(es.eigenvalues()(i), 0.0));
    re(i) = r.real();
    im(i) = r.imag();
  }
  return {v * re.asDiagonal() * v.transpose(), v * im.asDiagonal() * v.transpose()};
}

double lambda_lcu(const DFRepresentation& rep, LambdaReport* report) {
  const double one = rep.one_body.f_eigs.cwiseAbs().sum();
  double total = one;
  std::vector<double> per_leaf;
  for (const auto& leaf : rep.leaves) {
    double t = 0.0;
    for (Eigen::Index k = 0; k < leaf.z.rows(); ++k) {
      t += 0.25 * std::abs(leaf.z(k, k));
      for (Eigen::Index l = k + 1; l < leaf.z.cols(); ++l) t += std::abs(leaf.z(k, l));
    }
    per_leaf.push_back(t);
    total += t;
  }
  if (report) {
    report->one_body_part = one;
    report->lambda_lcu = total;
    report->per_leaf_lcu = std::move(per_leaf);
  }
  return total;
}

double lambda_burg(const DFRepresentation& rep, LambdaReport* report) {
  const double one = rep.one_body.f_eigs.cwiseAbs().sum();
  double total = one;
  std::vector<double> per_leaf;
  for (const auto& leaf : rep.leaves) {
    const Eigen::MatrixXcd w = leaf_sqrt(leaf.z).complex();
    const Vec col_sums = w.cwiseAbs().colwise().sum().transpose();
    const double t = 0.25 * col_sums.squaredNorm();
    per_leaf.push_back(t);
    total += t;
  }
  if (report) {
    report->one_body_part = one;
    report->lambda_burg = total;
    report->per_leaf_burg = std::move(per_leaf);
  }
  return total;
}

LambdaReport lambda_report(const DFRepresentation& rep) {
  LambdaReport r;
  lambda_lcu(rep, &r);
  lambda_burg(rep, &r);
  return r;
}

CholeskyDF cholesky_df_lambda(const IntegralSet& set, double threshold) {
  const DFRepresentation rep = xdf_factorize(set);
  const int n = set.n;
  CholeskyDF out;
  out.lambda = rep.one_body.f_eigs.cwiseAbs().sum();
  Mat model = Mat::Zero(n * n, n * n);
  for (const auto& leaf : rep.leaves) {
    const auto& origin = *leaf.origin;
    const double root = std::sqrt(std::abs(origin.g));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (origin.v + origin.v.transpose()));
    Vec lam = root * es.eigenvalues();
    for (Eigen::Index k = 0; k < lam.size(); ++k)
      if (std::abs(lam(k)) < threshold) lam(k) = 0.0;
    if (lam.cwiseAbs().maxCoeff() == 0.0) continue;
    ++out.rank;
    const Mat l = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::Map<const Vec> lv(l.data(), l.size());
    model.noalias() += (origin.g >= 0 ? 1.0 : -1.0) * lv * lv.transpose();
    const double l1 = lam.cwiseAbs().sum();
    out.lambda += 0.25 * l1 * l1;
  }
  out.frob_error = (model - set.eri).norm();
  return out;
}

}  // namespace dfkit
