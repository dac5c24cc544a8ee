// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/fff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "dfkit/errors.hpp"
#include "dfkit/linalg.hpp"

namespace dfkit {

namespace {

void check_shape(const DFRepresentation& rep, const FFFCoefficients& c) {
  if (c.rows() != rep.n_t() || c.cols() != rep.n) {
    throw PreconditionError("FFF coefficients must be " + std::to_string(rep.n_t()) + " x " + std::to_string(rep.n));
  }
}

Vec row_sums(const Mat& z) { return z.rowwise().sum(); }

double optimal_variance(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::sqrt(std::max(x, 0.0));
  return s * s;
}

}  // namespace

FFFCoefficients fff_eq6_coefficients(const DFRepresentation& rep) {
  FFFCoefficients c(rep.n_t(), rep.n);
  for (int t = 0; t < rep.n_t(); ++t) c.row(t) = -row_sums(rep.leaves[t].z).transpose();
  return c;
}

PauliHamiltonian build_fff_hamiltonian(const IntegralSet& set, const DFRepresentation& rep, const FFFCoefficients& c) {
  check_shape(rep, c);
  const int n = rep.n;
  Mat cm = modified_one_body(set);
  std::vector<Vec> d;
  for (int t = 0; t < rep.n_t(); ++t) {
    const auto& leaf = rep.leaves[t];
    d.push_back(row_sums(leaf.z) + c.row(t).transpose());
    cm -= leaf.u * d.back().asDiagonal() * leaf.u.transpose();
  }
  cm = 0.5 * (cm + cm.transpose());

  PauliHamiltonian h;
  h.n = n;
  h.constant = scalar_offset(set);
  auto eig = sym_eig(cm);
  make_special_orthogonal(eig.vectors, eig.values);
  MeasurementBasis one;
  one.rotation = eig.vectors;
  one.linear = Vec(2 * n);
  for (int k = 0; k < n; ++k) one.linear(2 * k) = one.linear(2 * k + 1) = -0.5 * eig.values(k);
  one.quadratic = Mat::Zero(2 * n, 2 * n);
  h.bases.push_back(std::move(one));
  for (int t = 0; t < rep.n_t(); ++t) {
    MeasurementBasis b = leaf_block(rep.leaves[t]);
    for (int k = 0; k < n; ++k) b.linear(2 * k) = b.linear(2 * k + 1) = -0.5 * d[t](k);
    h.bases.push_back(std::move(b));
  }
  return h;
}

FFFCoefficients fff_initial(const DFRepresentation& rep, FffInit init, std::uint64_t seed) {
  switch (init) {
    case FffInit::Zero:
      return FFFCoefficients::Zero(rep.n_t(), rep.n);
    case FffInit::Eq6:
      return fff_eq6_coefficients(rep);
    case FffInit::Random: {
      std::mt19937_64 rng(seed);
      FFFCoefficients c(rep.n_t(), rep.n);
      for (int t = 0; t < rep.n_t(); ++t)
        for (int k = 0; k < rep.n; ++k) c(t, k) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return c;
    }
  }
  throw PreconditionError("unknown FFF initialization");
}

FffModel::FffModel(const IntegralSet& set, const DFRepresentation& rep, const FockState& psi)
    : n_(rep.n), n_t_(rep.n_t()) {
  f_ = modified_one_body(set);
  f_ = 0.5 * (f_ + f_.transpose());
  const int m = n_ * n_;
  std::vector<Eigen::VectorXcd> phi;
  for (int p = 0; p < n_; ++p)
    for (int q = 0; q < n_; ++q) phi.push_back(apply_excitation(psi, p, q).amplitudes);
  cov_.resize(m, m);
  mean_.resize(m);
  for (int a = 0; a < m; ++a) {
    mean_(a) = psi.amplitudes.dot(phi[a]).real();
    for (int b = a; b < m; ++b) cov_(a, b) = cov_(b, a) = phi[a].dot(phi[b]).real();
  }

  for (const auto& leaf : rep.leaves) {
    LeafData ld;
    ld.u = leaf.u;
    ld.d0 = row_sums(leaf.z);
    const MeasurementBasis block = leaf_block(leaf);
    const FockState rotated = rotate_orbitals(psi, leaf.u);
    std::vector<std::uint64_t> outcomes;
    for (Eigen::Index b = 0; b < rotated.amplitudes.size(); ++b) {
      const double p = std::norm(rotated.amplitudes(b));
      if (p <= 0.0) continue;
      ld.prob.push_back(p);
      ld.f0.push_back(block_value(block, static_cast<std::uint64_t>(b)));
      outcomes.push_back(static_cast<std::uint64_t>(b));
    }
    ld.y.resize(n_, static_cast<Eigen::Index>(outcomes.size()));
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      for (int k = 0; k < n_; ++k) {
        const double up = ((outcomes[i] >> (2 * k)) & 1) ? -1.0 : 1.0;
        const double down = ((outcomes[i] >> (2 * k + 1)) & 1) ? -1.0 : 1.0;
        ld.y(k, static_cast<Eigen::Index>(i)) = up + down;
      }
    leaves_.push_back(std::move(ld));
  }
}

Mat FffModel::one_body_matrix(const FFFCoefficients& c) const {
  Mat cm = f_;
  for (int t = 0; t < n_t_; ++t) {
    const Vec d = leaves_[t].d0 + c.row(t).transpose();
    cm -= leaves_[t].u * d.asDiagonal() * leaves_[t].u.transpose();
  }
  return 0.5 * (cm + cm.transpose());
}

std::vector<double> FffModel::block_variances(const FFFCoefficients& c, std::vector<Mat>* grad) const {
  if (c.rows() != n_t_ || c.cols() != n_) throw PreconditionError("FFF coefficient shape mismatch");
  std::vector<double> v;
  if (grad) grad->assign(n_t_ + 1, Mat::Zero(n_t_, n_));

  const Mat cm = one_body_matrix(c);
  const Eigen::Map<const Vec> cv(cm.data(), cm.size());
  const double mu = mean_.dot(cv);
  const Vec gc = cov_ * cv;
  v.push_back(std::max(cv.dot(gc) - mu * mu, 0.0));
  if (grad) {
    const Vec g = 2.0 * gc - 2.0 * mu * mean_;
    const Eigen::Map<const Mat> gm(g.data(), n_, n_);
    for (int t = 0; t < n_t_; ++t)
      for (int k = 0; k < n_; ++k) {
        const Vec uk = leaves_[t].u.col(k);
        (*grad)[0](t, k) = -uk.dot(gm * uk);
      }
  }

  for (int t = 0; t < n_t_; ++t) {
    const auto& ld = leaves_[t];
    const Vec d = ld.d0 + c.row(t).transpose();
    const auto outcomes = static_cast<Eigen::Index>(ld.prob.size());
    Vec f(outcomes);
    for (Eigen::Index i = 0; i < outcomes; ++i) f(i) = ld.f0[i] - 0.5 * d.dot(ld.y.col(i));
    const Eigen::Map<const Vec> p(ld.prob.data(), outcomes);
    const double fm = p.dot(f);
    const Vec fc = (f.array() - fm).matrix();
    v.push_back(p.dot(fc.cwiseAbs2()));
    if (grad) {
      const Vec ym = ld.y * p;
      for (int k = 0; k < n_; ++k) {
        const Vec yc = (ld.y.row(k).transpose().array() - ym(k)).matrix();
        (*grad)[t + 1](t, k) = -p.dot(fc.cwiseProduct(yc));
      }
    }
  }
  return v;
}

double FffModel::variance(const FFFCoefficients& c, const std::vector<double>& shots, Mat* grad) const {
  std::vector<Mat> gb;
  const auto v = block_variances(c, grad ? &gb : nullptr);
  if (shots.size() != v.size()) throw PlanError("plan length does not match the bases");
  double total = 0.0;
  if (grad) *grad = Mat::Zero(n_t_, n_);
  for (std::size_t b = 0; b < v.size(); ++b) {
    if (shots[b] <= 0.0) {
      if (v[b] > 1e-12) return std::numeric_limits<double>::infinity();
      continue;
    }
    total += v[b] / shots[b];
    if (grad) *grad += gb[b] / shots[b];
  }
  return total;
}

FffVariance fff_variance(const IntegralSet& set, const DFRepresentation& rep, const FFFCoefficients& c,
                         const FockState& psi, const MeasurementPlan& plan, bool finite_difference, double fd_step) {
  check_shape(rep, c);
  const FffModel model(set, rep, psi);
  std::vector<double> shots(plan.shots_per_basis.begin(), plan.shots_per_basis.end());
  FffVariance out;
  if (!finite_difference) {
    out.variance = model.variance(c, shots, &out.gradient);
    return out;
  }
  out.variance = model.variance(c, shots);
  out.gradient = Mat::Zero(c.rows(), c.cols());
  for (Eigen::Index t = 0; t < c.rows(); ++t)
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      FFFCoefficients cp = c, cm = c;
      cp(t, k) += fd_step;
      cm(t, k) -= fd_step;
      out.gradient(t, k) = (model.variance(cp, shots) - model.variance(cm, shots)) / (2.0 * fd_step);
    }
  return out;
}

double fff_shots_to_target(const FffModel& model, const FFFCoefficients& c, double epsilon) {
  return optimal_variance(model.block_variances(c)) / (epsilon * epsilon);
}

FffResult fff_optimize(const IntegralSet& set, const DFRepresentation& rep, const FFFCoefficients& init,
                       const FockState& psi, long long shots_total, const FffConfig& config) {
  check_shape(rep, init);
  if (shots_total < 1) throw PreconditionError("shots_total must be positive");
  const FffModel model(set, rep, psi);
  const Eigen::Index rows = init.rows(), cols = init.cols();

  FffResult res;
  res.c = init;
  std::vector<double> v = model.block_variances(init);
  double best = optimal_variance(v);
  res.initial_shots = best / (config.epsilon * config.epsilon);
  res.trace.push_back(best);

  for (int iter = 1; iter <= config.max_outer_iters && rows > 0; ++iter) {
    // Optimal continuous shot fractions at the current c.
    const double root_sum = std::sqrt(best);
    std::vector<double> frac;
    for (double x : v) frac.push_back(std::max(std::sqrt(std::max(x, 0.0)) / root_sum, 1e-12));

    const Objective objective = [&](const Vec& x, Vec& grad) {
      const Eigen::Map<const Mat> c(x.data(), rows, cols);
      Mat g;
      const double f = model.variance(c, frac, &g);
      grad = Eigen::Map<const Vec>(g.data(), g.size());
      return f;
    };
    const Vec x0 = Eigen::Map<const Vec>(res.c.data(), res.c.size());
    const LbfgsResult lb = lbfgs_minimize(objective, x0, config.lbfgs);
    const FFFCoefficients c = Eigen::Map<const Mat>(lb.x.data(), rows, cols);
    const std::vector<double> v_new = model.block_variances(c);
    const double value = optimal_variance(v_new);
    res.iterations = iter;
    res.trace.push_back(std::min(value, best));
    const bool improved = value < best;
    const bool small = !(best - value > config.rel_tol * best);
    if (improved) {
      res.c = c;
      v = v_new;
      best = value;
    }
    if (small) {
      res.converged = true;
      break;
    }
  }
  if (rows == 0) res.converged = true;

  res.shots_to_target = best / (config.epsilon * config.epsilon);
  res.plan.scheme = Scheme::Explicit;
  res.plan.shots_total = shots_total;
  res.plan.shots_per_basis = optimal_allocation(v, shots_total);
  const double wsum = std::accumulate(v.begin(), v.end(), 0.0);
  for (double x : v) res.plan.weights.push_back(wsum > 0 ? x / wsum : 0.0);
  return res;
}

}  // namespace dfkit
