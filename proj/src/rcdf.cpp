// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/rcdf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "dfkit/errors.hpp"
#include "dfkit/linalg.hpp"

namespace dfkit {

namespace {

using Blocks = std::vector<Mat>;

Mat pair_products(const Mat& u) {
  const auto n = u.rows();
  Mat p(n * n, u.cols());
  for (Eigen::Index k = 0; k < u.cols(); ++k)
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) p(a * n + b, k) = u(a, k) * u(b, k);
  return p;
}

void check_shapes(const Blocks& u, const Blocks& z, const Mat& eri) {
  if (u.size() != z.size()) throw PreconditionError("rotation and coefficient counts differ");
  for (std::size_t t = 0; t < u.size(); ++t) {
    const auto n = u[t].rows();
    if (u[t].cols() != n || z[t].rows() != n || z[t].cols() != n || eri.rows() != n * n || eri.cols() != n * n) {
      throw PreconditionError("shape mismatch in leaf " + std::to_string(t));
    }
  }
}

double dot(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t].cwiseProduct(b[t]).sum();
  return s;
}

double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Blocks& x, Blocks& y) {
  for (std::size_t t = 0; t < x.size(); ++t) y[t] += alpha * x[t];
}

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

// Normal equations of the quadratic Z-subproblem:
//   A(Z)_t = sum_o S_to Z_o S_to^T + 2 rho_t o Z_t,  S_to = (U_t^T U_o) o (U_t^T U_o).
// An optional mask restricts the system to the entries where it is nonzero.
struct ZSystem {
  int n_t = 0;
  std::vector<Mat> s;  // s[t * n_t + o]
  Blocks diag_shift;   // 2 rho
  Blocks b;
  Blocks mask;

  ZSystem(const Blocks& u, const Mat& eri, const RegularizationConfig& reg, bool with_l2) {
    n_t = static_cast<int>(u.size());
    s.resize(static_cast<std::size_t>(n_t) * n_t);
    for (int t = 0; t < n_t; ++t)
      for (int o = 0; o < n_t; ++o) {
        const Mat c = u[t].transpose() * u[o];
        s[t * n_t + o] = c.cwiseProduct(c);
      }
    for (int t = 0; t < n_t; ++t) {
      const auto n = static_cast<int>(u[t].rows());
      const Mat p = pair_products(u[t]);
      Mat bt = p.transpose() * eri * p;
      b.push_back(0.5 * (bt + bt.transpose()));
      diag_shift.push_back(with_l2 ? Mat(2.0 * reg.weights(t, n)) : Mat::Zero(n, n));
    }
  }

  Blocks apply(const Blocks& z) const {
    Blocks out(z.size());
    for (int t = 0; t < n_t; ++t) {
      Mat acc = diag_shift[t].cwiseProduct(z[t]);
      for (int o = 0; o < n_t; ++o) acc.noalias() += s[t * n_t + o] * z[o] * s[t * n_t + o].transpose();
      out[t] = 0.5 * (acc + acc.transpose());
      if (!mask.empty()) out[t] = out[t].cwiseProduct(mask[t]);
    }
    return out;
  }

  // Diagonal of A: S_tt = I, so only the identity and the shift contribute.
  Blocks inverse_diagonal() const {
    Blocks d(diag_shift.size());
    for (std::size_t t = 0; t < d.size(); ++t) d[t] = (1.0 + diag_shift[t].array()).inverse().matrix();
    return d;
  }

  Blocks masked(Blocks v) const {
    if (!mask.empty())
      for (std::size_t t = 0; t < v.size(); ++t) v[t] = v[t].cwiseProduct(mask[t]);
    return v;
  }
};

// Jacobi-preconditioned CG from zero.
Blocks conjugate_gradient(const ZSystem& sys, const Blocks& rhs, const CgSettings& cg, int& iters,
                          double& rel_residual) {
  Blocks x(rhs.size());
  for (std::size_t t = 0; t < rhs.size(); ++t) x[t] = Mat::Zero(rhs[t].rows(), rhs[t].cols());
  const Blocks minv = sys.inverse_diagonal();
  Blocks r = sys.masked(rhs);
  const double b_norm = norm(r);
  iters = 0;
  rel_residual = 0.0;
  if (b_norm == 0.0) return x;

  auto precondition = [&](const Blocks& v) {
    Blocks out(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) out[t] = minv[t].cwiseProduct(v[t]);
    return out;
  };
  Blocks z = precondition(r);
  Blocks p = z;
  double rz = dot(r, z);
  double r_norm = b_norm;
  while (iters < cg.max_iters) {
    const Blocks ap = sys.apply(p);
    const double pap = dot(p, ap);
    if (!(pap > 0)) break;
    const double alpha = rz / pap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    ++iters;
    r_norm = norm(r);
    if (r_norm <= cg.rel_tol * b_norm) break;
    z = precondition(r);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t t = 0; t < p.size(); ++t) p[t] = z[t] + beta * p[t];
  }
  rel_residual = r_norm / b_norm;
  if (rel_residual > cg.rel_tol) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", rel_residual);
    throw ConvergenceError(std::string("conjugate gradients stopped at relative residual ") + buf + " after " +
                               std::to_string(iters) + " iterations",
                           rel_residual);
  }
  for (auto& m : x) m = 0.5 * (m + m.transpose());
  return x;
}

// Minimum-norm solution of the assembled system. Used when CG stalls on the
// near-singular systems that arise without regularization.
constexpr Eigen::Index kDenseLimit = 4096;

Blocks dense_solve(const ZSystem& sys, const Blocks& rhs, double& rel_residual) {
  const auto n_t = static_cast<Eigen::Index>(rhs.size());
  const Eigen::Index n = rhs[0].rows();
  const Eigen::Index block = n * n;
  Mat a(n_t * block, n_t * block);
  Vec b(n_t * block);
  Blocks e(rhs.size());
  for (auto& m : e) m = Mat::Zero(n, n);
  const Blocks masked_rhs = sys.masked(rhs);
  for (Eigen::Index t = 0; t < n_t; ++t)
    for (Eigen::Index k = 0; k < block; ++k) {
      b(t * block + k) = masked_rhs[t](k / n, k % n);
      e[t](k / n, k % n) = 1.0;
      const Blocks col = sys.apply(e);
      e[t](k / n, k % n) = 0.0;
      for (Eigen::Index o = 0; o < n_t; ++o)
        for (Eigen::Index j = 0; j < block; ++j) a(o * block + j, t * block + k) = col[o](j / n, j % n);
    }
  const Vec x = a.completeOrthogonalDecomposition().solve(b);
  rel_residual = (b - a * x).norm() / b.norm();
  Blocks out(rhs.size());
  for (Eigen::Index t = 0; t < n_t; ++t) {
    Mat m(n, n);
    for (Eigen::Index k = 0; k < block; ++k) m(k / n, k % n) = x(t * block + k);
    out[t] = 0.5 * (m + m.transpose());
  }
  return out;
}

int independent_count(int n) { return n * (n - 1) / 2; }

Vec pack(const Blocks& g) {
  const int n = g.empty() ? 0 : static_cast<int>(g[0].rows());
  Vec v(static_cast<Eigen::Index>(g.size()) * independent_count(n));
  Eigen::Index i = 0;
  for (const auto& m : g)
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) v(i++) = m(p, q);
  return v;
}

Blocks unpack(const Vec& v, int n_t, int n) {
  Blocks x(n_t, Mat::Zero(n, n));
  Eigen::Index i = 0;
  for (auto& m : x)
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        m(p, q) = v(i);
        m(q, p) = -v(i);
        ++i;
      }
  return x;
}

}  // namespace

Mat RegularizationConfig::weights(int t, int n) const {
  if (rho_tensor.empty()) return Mat::Constant(n, n, rho);
  return rho_tensor[static_cast<std::size_t>(t)];
}

bool RegularizationConfig::is_zero() const {
  if (rho_tensor.empty()) return rho == 0.0;
  return std::all_of(rho_tensor.begin(), rho_tensor.end(), [](const Mat& m) { return m.isZero(0.0); });
}

void RegularizationConfig::validate(int n_t, int n) const {
  if (gamma != 1 && gamma != 2) throw PreconditionError("gamma must be 1 or 2");
  if (rho_tensor.empty()) {
    if (!(rho >= 0.0)) throw PreconditionError("rho must be non-negative");
    return;
  }
  if (static_cast<int>(rho_tensor.size()) != n_t) throw PreconditionError("rho tensor leaf count does not match n_t");
  for (const auto& m : rho_tensor) {
    if (m.rows() != n || m.cols() != n) throw PreconditionError("rho tensor block has the wrong shape");
    if (!(m.minCoeff() >= 0.0)) throw PreconditionError("rho tensor has a negative weight");
  }
}

void OptimizerConfig::validate() const {
  if (n_t < 1) throw PreconditionError("n_t must be at least 1");
  if (!(frob_tol > 0) || !(stall_tol > 0) || !(lbfgs.grad_tol > 0) || !(cg.rel_tol > 0) || !(l1.sign_tol > 0)) {
    throw PreconditionError("tolerances must be positive");
  }
  if (max_outer_iters < 0 || lbfgs.max_iters < 1 || lbfgs.memory < 1 || cg.max_iters < 1 || l1.max_sweeps < 1) {
    throw PreconditionError("iteration caps must be positive");
  }
}

GeneratorSet GeneratorSet::from_rotations(const std::vector<Mat>& u) {
  GeneratorSet g;
  for (const auto& m : u) g.x.push_back(logm_special_orthogonal(m));
  return g;
}

std::vector<Mat> GeneratorSet::rotations() const {
  std::vector<Mat> u;
  for (const auto& m : x) u.push_back(expm_antisymmetric(m));
  return u;
}

Mat residual(const Blocks& u, const Blocks& z, const Mat& eri) {
  check_shapes(u, z, eri);
  Mat delta = -eri;
  for (std::size_t t = 0; t < u.size(); ++t) {
    const Mat p = pair_products(u[t]);
    delta.noalias() += p * z[t] * p.transpose();
  }
  return delta;
}

double penalty(const Blocks& z, const RegularizationConfig& reg) {
  double s = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    const Mat w = reg.weights(static_cast<int>(t), static_cast<int>(z[t].rows()));
    s += reg.gamma == 1 ? w.cwiseProduct(z[t].cwiseAbs()).sum() : w.cwiseProduct(z[t].cwiseAbs2()).sum();
  }
  return s;
}

double cost(const Blocks& u, const Blocks& z, const Mat& eri, const RegularizationConfig& reg) {
  return 0.5 * residual(u, z, eri).squaredNorm() + penalty(z, reg);
}

Blocks grad_u(const Blocks& u, const Blocks& z, const Mat& delta) {
  Blocks out;
  for (std::size_t t = 0; t < u.size(); ++t) {
    const auto n = u[t].rows();
    const Mat p = pair_products(u[t]);
    const Mat y = delta * p * z[t].transpose() + delta.transpose() * p * z[t];
    Mat g = Mat::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
      for (Eigen::Index k = 0; k < n; ++k) {
        double acc = 0.0;
        for (Eigen::Index q = 0; q < n; ++q) acc += (y(m * n + q, k) + y(q * n + m, k)) * u[t](q, k);
        g(m, k) = acc;
      }
    out.push_back(std::move(g));
  }
  return out;
}

Blocks grad_x(const GeneratorSet& x, const Blocks& u, const Blocks& z, const Mat& delta) {
  const Blocks gu = grad_u(u, z, delta);
  Blocks out;
  for (std::size_t t = 0; t < gu.size(); ++t) {
    const Mat h = dexp_adjoint(x.x[t], gu[t]);
    out.push_back(h - h.transpose());
  }
  return out;
}

Blocks grad_z(const Blocks& u, const Blocks& z, const Mat& delta, const RegularizationConfig& reg) {
  Blocks out;
  for (std::size_t t = 0; t < u.size(); ++t) {
    const auto n = static_cast<int>(u[t].rows());
    const Mat p = pair_products(u[t]);
    Mat g = p.transpose() * delta * p;
    const Mat w = reg.weights(static_cast<int>(t), n);
    if (reg.gamma == 2) {
      g += 2.0 * w.cwiseProduct(z[t]);
    } else {
      g += w.cwiseProduct(z[t].unaryExpr([](double v) { return sign(v); }));
    }
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

// `dense_first` (optional) skips CG once it has failed on an earlier call.
ZSolve solve_l2(const Blocks& u, const Mat& eri, const RegularizationConfig& reg, const CgSettings& cg,
                bool* dense_first) {
  reg.validate(static_cast<int>(u.size()), u.empty() ? 0 : static_cast<int>(u[0].rows()));
  const ZSystem sys(u, eri, reg, true);
  ZSolve out;
  const bool small = !u.empty() && static_cast<Eigen::Index>(u.size()) * u[0].size() <= kDenseLimit;
  if (small && dense_first && *dense_first) {
    out.z = dense_solve(sys, sys.b, out.rel_residual);
    return out;
  }
  try {
    out.z = conjugate_gradient(sys, sys.b, cg, out.cg_iters, out.rel_residual);
  } catch (const ConvergenceError&) {
    if (!small) throw;
    out.z = dense_solve(sys, sys.b, out.rel_residual);
    if (dense_first) *dense_first = true;
  }
  return out;
}

}  // namespace

ZSolve solve_z_l2(const Blocks& u, const Mat& eri, const RegularizationConfig& reg, const CgSettings& cg) {
  return solve_l2(u, eri, reg, cg, nullptr);
}

namespace {

// Sign-pattern fixed point: solve on the support with rho moved into the
// right-hand side, drop entries whose sign flips, release zeros that violate
// the subgradient bound. Returns false when a pattern is inconsistent.
bool l1_active_set(ZSystem& sys, const Blocks& rho, Blocks s, const CgSettings& cg, const L1Settings& l1,
                   ZSolve& out) {
  const int n_t = sys.n_t;
  for (int sweep = 1; sweep <= l1.max_sweeps; ++sweep) {
    ++out.sweeps;
    Blocks rhs(n_t);
    sys.mask.assign(n_t, Mat());
    for (int t = 0; t < n_t; ++t) {
      sys.mask[t] = s[t].cwiseAbs();
      rhs[t] = sys.b[t] - rho[t].cwiseProduct(s[t]);
    }
    int iters = 0;
    Blocks z;
    try {
      z = conjugate_gradient(sys, rhs, cg, iters, out.rel_residual);
    } catch (const ConvergenceError&) {
      sys.mask.clear();
      return false;
    }
    out.cg_iters += iters;
    sys.mask.clear();

    bool changed = false;
    for (int t = 0; t < n_t; ++t)
      for (Eigen::Index k = 0; k < z[t].rows(); ++k)
        for (Eigen::Index l = 0; l < z[t].cols(); ++l) {
          if (s[t](k, l) != 0.0 && z[t](k, l) * s[t](k, l) <= 0.0) {
            s[t](k, l) = 0.0;
            z[t](k, l) = 0.0;
            changed = true;
          }
        }
    if (!changed) {
      const Blocks az = sys.apply(z);
      for (int t = 0; t < n_t; ++t)
        for (Eigen::Index k = 0; k < z[t].rows(); ++k)
          for (Eigen::Index l = 0; l < z[t].cols(); ++l) {
            if (s[t](k, l) != 0.0) continue;
            const double g = az[t](k, l) - sys.b[t](k, l);
            if (std::abs(g) > rho[t](k, l) * (1.0 + l1.sign_tol) + l1.sign_tol) {
              s[t](k, l) = -sign(g);
              changed = true;
            }
          }
    }
    if (!changed) {
      out.z = std::move(z);
      return true;
    }
  }
  return false;
}

// Accelerated proximal gradient on 1/2 <Z, A Z> - <b, Z> + sum rho |Z|.
Blocks l1_proximal(const ZSystem& sys, const Blocks& rho, Blocks z, int max_iters) {
  const int n_t = sys.n_t;
  Blocks v = sys.b;
  double lip = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double nv = norm(v);
    if (nv == 0.0) break;
    for (auto& m : v) m /= nv;
    v = sys.apply(v);
    lip = norm(v);
  }
  lip = std::max(lip, 1e-300) * 1.01;

  auto prox = [&](const Blocks& y) {
    const Blocks ay = sys.apply(y);
    Blocks out(n_t);
    for (int t = 0; t < n_t; ++t) {
      const Mat step = y[t] - (ay[t] - sys.b[t]) / lip;
      out[t] = step.binaryExpr(rho[t], [&](double x, double r) {
        const double thr = r / lip;
        return x > thr ? x - thr : (x < -thr ? x + thr : 0.0);
      });
    }
    return out;
  };

  Blocks y = z;
  double tk = 1.0;
  const double scale = std::max(norm(sys.b), 1.0);
  for (int it = 0; it < max_iters; ++it) {
    Blocks next = prox(y);
    Blocks diff = next;
    axpy(-1.0, z, diff);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    y = next;
    axpy((tk - 1.0) / tn, diff, y);
    z = std::move(next);
    tk = tn;
    if (norm(diff) <= 1e-15 * scale) break;
  }
  return z;
}

}  // namespace

ZSolve solve_z_l1(const Blocks& u, const Mat& eri, const RegularizationConfig& reg, const Blocks& current_z,
                  const CgSettings& cg, const L1Settings& l1) {
  const int n_t = static_cast<int>(u.size());
  const int n = u.empty() ? 0 : static_cast<int>(u[0].rows());
  reg.validate(n_t, n);
  if (reg.is_zero()) return solve_z_l2(u, eri, reg, cg);

  ZSystem sys(u, eri, reg, false);
  Blocks rho(n_t), s(n_t);
  const bool warm = static_cast<int>(current_z.size()) == n_t &&
                    std::any_of(current_z.begin(), current_z.end(), [](const Mat& m) { return !m.isZero(0.0); });
  for (int t = 0; t < n_t; ++t) {
    rho[t] = reg.weights(t, n);
    s[t] = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        if (warm) {
          s[t](k, l) = sign(current_z[t](k, l));
        } else if (std::abs(sys.b[t](k, l)) > rho[t](k, l)) {
          s[t](k, l) = sign(sys.b[t](k, l));
        }
      }
  }

  ZSolve out;
  if (l1_active_set(sys, rho, s, cg, l1, out)) return out;

  // The singular system admits no solution for this pattern; locate the
  // support with proximal steps and polish it.
  Blocks start(n_t);
  for (int t = 0; t < n_t; ++t) start[t] = warm ? Mat(0.5 * (current_z[t] + current_z[t].transpose())) : Mat::Zero(n, n);
  const Blocks z = l1_proximal(sys, rho, start, std::max(cg.max_iters, 1000) * 10);
  for (int t = 0; t < n_t; ++t) s[t] = z[t].unaryExpr([](double v) { return sign(v); });
  if (l1_active_set(sys, rho, s, cg, l1, out)) return out;
  out.z = z;
  return out;
}

RcdfResult rcdf_optimize(const IntegralSet& set, const DFRepresentation& init, const RegularizationConfig& reg,
                         const OptimizerConfig& opt, const TraceSink& sink) {
  opt.validate();
  const int n = set.n;
  const int n_t = opt.n_t;
  if (init.n_t() != n_t) {
    throw PreconditionError("initial representation has " + std::to_string(init.n_t()) + " leaves, expected " +
                            std::to_string(n_t));
  }
  if (init.n != n) throw PreconditionError("initial representation does not match the orbital count");
  reg.validate(n_t, n);
  for (const auto& leaf : init.leaves) {
    if (orthogonality_error(leaf.u) > 1e-8) throw PreconditionError("initial rotation is not orthogonal");
  }

  Blocks u0, z;
  for (const auto& leaf : init.leaves) {
    u0.push_back(leaf.u);
    z.push_back(0.5 * (leaf.z + leaf.z.transpose()));
  }
  GeneratorSet gen = GeneratorSet::from_rotations(u0);
  Blocks u = gen.rotations();

  auto snapshot = [&](const Blocks& uu, const Blocks& zz) {
    DFRepresentation rep;
    rep.n = n;
    rep.one_body = init.one_body;
    rep.offset = init.offset;
    for (int t = 0; t < n_t; ++t) rep.leaves.push_back({uu[t], zz[t], std::nullopt});
    return rep;
  };

  const Mat& eri = set.eri;
  Mat delta = residual(u, z, eri);
  double frob = delta.norm();
  double pen = penalty(z, reg);
  double c = 0.5 * frob * frob + pen;

  RcdfResult res;
  res.initial_cost = c;
  res.final_cost = c;
  res.frob_error = frob;
  res.rep = snapshot(u, z);
  if (sink) sink({0, c, frob, pen, 0, 0});
  if (frob <= opt.frob_tol && pen == 0.0) {
    res.converged = true;
    return res;
  }

  const Objective objective = [&](const Vec& v, Vec& grad) {
    GeneratorSet g{unpack(v, n_t, n)};
    const Blocks uu = g.rotations();
    const Mat d = residual(uu, z, eri);
    grad = pack(grad_x(g, uu, z, d));
    return 0.5 * d.squaredNorm();
  };

  double prev = c;
  bool dense_first = false;
  for (int cycle = 1; cycle <= opt.max_outer_iters; ++cycle) {
    const LbfgsResult lb = lbfgs_minimize(objective, pack(gen.x), opt.lbfgs);
    gen.x = unpack(lb.x, n_t, n);
    u = gen.rotations();

    const ZSolve zs = reg.gamma == 2 ? solve_l2(u, eri, reg, opt.cg, &dense_first) : solve_z_l1(u, eri, reg, z, opt.cg, opt.l1);
    z = zs.z;

    delta = residual(u, z, eri);
    frob = delta.norm();
    pen = penalty(z, reg);
    c = 0.5 * frob * frob + pen;
    res.cycles = cycle;
    if (sink) sink({cycle, c, frob, pen, zs.cg_iters, lb.iterations});

    if (c < res.final_cost) {
      res.final_cost = c;
      res.frob_error = frob;
      res.rep = snapshot(u, z);
    }
    if (frob <= opt.frob_tol) {
      res.converged = true;
      break;
    }
    if (prev - c <= opt.stall_tol * std::max(std::abs(prev), std::numeric_limits<double>::min())) {
      res.stalled = true;
      break;
    }
    prev = c;
  }
  return res;
}

PenaltyInit high_penalty_truncation_init(const IntegralSet& set, int n_t, double rho_high, double rho_base,
                                         int gamma) {
  PenaltyInit out;
  out.rep = xdf_factorize(set);
  if (n_t < 0 || n_t > out.rep.n_t()) {
    throw BoundsError("n_t " + std::to_string(n_t) + " exceeds the full leaf count " + std::to_string(out.rep.n_t()));
  }
  out.reg.gamma = gamma;
  for (int t = 0; t < out.rep.n_t(); ++t) {
    out.reg.rho_tensor.push_back(Mat::Constant(set.n, set.n, t < n_t ? rho_base : rho_high));
  }
  return out;
}

DFRepresentation drop_small_leaves(const DFRepresentation& rep, double rel_tol) {
  double largest = 0.0;
  for (const auto& leaf : rep.leaves) largest = std::max(largest, leaf.z.norm());
  DFRepresentation out = rep;
  out.leaves.clear();
  for (const auto& leaf : rep.leaves)
    if (leaf.z.norm() >= rel_tol * largest && largest > 0) out.leaves.push_back(leaf);
  return out;
}

}  // namespace dfkit
