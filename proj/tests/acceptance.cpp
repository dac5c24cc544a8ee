// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one line per criterion and exits non-zero when a
// criterion fails that is not listed with --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dfkit/errors.hpp"
#include "dfkit/fff.hpp"
#include "dfkit/lcu.hpp"
#include "dfkit/linalg.hpp"
#include "dfkit/measure.hpp"
#include "dfkit/rcdf.hpp"
#include "dfkit/reference.hpp"
#include "dfkit/xdf.hpp"
#include "support.hpp"

using namespace dfkit;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void add(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

struct Fixture {
  std::string name;
  IntegralSet set;
  FcidumpHeader header;
  DFRepresentation full;
};

Fixture load(const std::string& name) {
  const auto p = read_fcidump(testing::data_path(name));
  return {name, p.integrals, p.header, xdf_factorize(p.integrals)};
}

SectorSpec sector_of(const Fixture& f) {
  return {(f.header.nelec + f.header.ms2) / 2, (f.header.nelec - f.header.ms2) / 2};
}

// Every representation built during the run, for the lambda ordering check.
std::vector<std::pair<std::string, DFRepresentation>> g_reps;

void record(const std::string& label, const DFRepresentation& rep) { g_reps.emplace_back(label, rep); }

DFRepresentation rcdf(const Fixture& f, int n_t, double rho, int gamma = 2, int max_cycles = 200) {
  DFRepresentation init = truncate(f.full, std::min(n_t, f.full.n_t()));
  while (init.n_t() < n_t) init.leaves.push_back({Mat::Identity(f.set.n, f.set.n), Mat::Zero(f.set.n, f.set.n), {}});
  RegularizationConfig reg;
  reg.gamma = gamma;
  reg.rho = rho;
  OptimizerConfig opt;
  opt.n_t = n_t;
  opt.max_outer_iters = max_cycles;
  return rcdf_optimize(f.set, init, reg, opt).rep;
}

std::vector<Mat> rotations_of(const std::vector<Mat>& x) {
  std::vector<Mat> u;
  for (const auto& m : x) u.push_back(expm_antisymmetric(m));
  return u;
}

double rel_error(const std::vector<Mat>& g, const std::vector<Mat>& fd) {
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    num += (g[t] - fd[t]).squaredNorm();
    den += fd[t].squaredNorm();
  }
  return std::sqrt(num / den);
}

// Column (t, k, l) holds u_pk u_qk u_rl u_sl at row (pq, rs).
Mat assemble_model(const std::vector<Mat>& u, int n) {
  const int n2 = n * n;
  Mat m = Mat::Zero(n2 * n2, static_cast<Eigen::Index>(u.size()) * n2);
  for (std::size_t t = 0; t < u.size(); ++t)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const auto col = static_cast<Eigen::Index>(t) * n2 + k * n + l;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s)
                m((p * n + q) * n2 + r * n + s, col) = u[t](p, k) * u[t](q, k) * u[t](r, l) * u[t](s, l);
      }
  return m;
}

std::vector<Mat> pinv_z(const std::vector<Mat>& u, const Mat& eri, int n, double rho) {
  const Mat m = assemble_model(u, n);
  Vec b(eri.size());
  for (Eigen::Index i = 0; i < eri.rows(); ++i)
    for (Eigen::Index j = 0; j < eri.cols(); ++j) b(i * eri.cols() + j) = eri(i, j);
  const Mat a = m.transpose() * m + 2.0 * rho * Mat::Identity(m.cols(), m.cols());
  const Vec sol = a.completeOrthogonalDecomposition().pseudoInverse() * (m.transpose() * b);
  std::vector<Mat> z;
  for (std::size_t t = 0; t < u.size(); ++t) {
    Mat zt(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) zt(k, l) = sol(static_cast<Eigen::Index>(t) * n * n + k * n + l);
    z.push_back(zt);
  }
  return z;
}

double max_diff(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  double d = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) d = std::max(d, (a[t] - b[t]).cwiseAbs().maxCoeff());
  return d;
}

double max_abs_all(const std::vector<Mat>& a) {
  double d = 0.0;
  for (const auto& m : a) d = std::max(d, m.cwiseAbs().maxCoeff());
  return d;
}

FockState random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  FockState psi;
  psi.n = n;
  psi.amplitudes.resize(Eigen::Index{1} << (2 * n));
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) psi.amplitudes(i) = {d(rng), d(rng)};
  psi.amplitudes.normalize();
  return psi;
}

double exchange_gain(const std::vector<double>& v, const std::vector<long long>& shots) {
  auto term = [](double var, long long s) { return var == 0.0 ? 0.0 : var / static_cast<double>(s); };
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (i == j || shots[i] <= 1) continue;
      const double before = term(v[i], shots[i]) + term(v[j], shots[j]);
      const double after = term(v[i], shots[i] - 1) + term(v[j], shots[j] + 1);
      best = std::max(best, (before - after) / before);
    }
  return best;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  for (const char* name : {"h2_n1.fcidump", "h4_n4.fcidump", "h2o_n7.fcidump"}) {
    const auto t0 = Clock::now();
    const auto set = read_fcidump(testing::data_path(name)).integrals;
    const auto rep = xdf_factorize(set);
    const double frob = frobenius_error(rep, set.eri);
    const double dt = seconds_since(t0);
    record(std::string(name) + " xdf", rep);
    o.add(frob <= 1e-9 && dt < 1.0, fmt("%s frob %.2e in %.3f s", name, frob, dt));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst_asym = 0.0;
  int over = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const auto rep = xdf_factorize(random_symmetric_set(n, 1000 + seed));
    if (rep.n_t() > max_leaf_count(n)) ++over;
    for (const auto& l : rep.leaves) worst_asym = std::max(worst_asym, l.origin->v_asymmetry);
  }
  o.add(worst_asym <= 1e-8, fmt("max |V - V^T| %.2e over 100 sets", worst_asym));
  o.add(over == 0, fmt("%d sets exceed n(n+1)/2 leaves", over));
  return o;
}

Outcome criterion3() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const auto set = random_symmetric_set(n, 2000 + seed);
    const Mat a = dense_pauli_hamiltonian(build_pauli_hamiltonian(xdf_factorize(set)));
    worst = std::max(worst, (a - testing::jw_oracle(set)).cwiseAbs().maxCoeff());
  }
  Outcome o;
  o.add(worst <= 1e-9, fmt("max entry difference %.2e over 20 sets, n <= 3", worst));
  return o;
}

Outcome criterion4() {
  const double h = 1e-5;
  double worst_u = 0.0, worst_x = 0.0, worst_c = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(3000 + seed);
    const int n = 2 + static_cast<int>(seed % 3), n_t = 1 + static_cast<int>(seed % 3);
    const auto set = random_symmetric_set(n, 3000 + seed);
    GeneratorSet gen;
    std::vector<Mat> z;
    for (int t = 0; t < n_t; ++t) {
      gen.x.push_back(testing::random_antisymmetric(n, rng, 1.5));
      z.push_back(testing::random_symmetric(n, rng));
    }
    const auto u = gen.rotations();
    const Mat d = residual(u, z, set.eri);

    const auto gu = grad_u(u, z, d);
    std::vector<Mat> fdu;
    for (int t = 0; t < n_t; ++t) {
      Mat f(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          auto up = u, um = u;
          up[t](i, j) += h;
          um[t](i, j) -= h;
          f(i, j) = (cost(up, z, set.eri, {}) - cost(um, z, set.eri, {})) / (2 * h);
        }
      fdu.push_back(f);
    }
    worst_u = std::max(worst_u, rel_error(gu, fdu));

    const auto gx = grad_x(gen, u, z, d);
    std::vector<Mat> fdx, ax;
    for (int t = 0; t < n_t; ++t) {
      Mat f = Mat::Zero(n, n), a = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          auto xp = gen.x, xm = gen.x;
          xp[t](i, j) += h;
          xp[t](j, i) -= h;
          xm[t](i, j) -= h;
          xm[t](j, i) += h;
          f(i, j) = (cost(rotations_of(xp), z, set.eri, {}) - cost(rotations_of(xm), z, set.eri, {})) / (2 * h);
          a(i, j) = gx[t](i, j);
        }
      fdx.push_back(f);
      ax.push_back(a);
    }
    worst_x = std::max(worst_x, rel_error(ax, fdx));
  }

  const auto set = read_fcidump(testing::data_path("h4_n4.fcidump")).integrals;
  const auto full = xdf_factorize(set);
  std::mt19937_64 rng(3100);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rep = truncate(full, 1 + trial % 5);
    const FffModel model(set, rep, random_state(4, rng));
    const Mat c = testing::random_matrix(rep.n_t(), 4, rng);
    std::vector<double> shots;
    for (int b = 0; b <= rep.n_t(); ++b) shots.push_back(1.0 + 10.0 * std::uniform_real_distribution<double>()(rng));
    Mat grad;
    model.variance(c, shots, &grad);
    Mat fd(c.rows(), c.cols());
    for (Eigen::Index t = 0; t < c.rows(); ++t)
      for (Eigen::Index k = 0; k < c.cols(); ++k) {
        Mat cp = c, cm = c;
        cp(t, k) += h;
        cm(t, k) -= h;
        fd(t, k) = (model.variance(cp, shots) - model.variance(cm, shots)) / (2 * h);
      }
    worst_c = std::max(worst_c, (grad - fd).norm() / fd.norm());
  }

  Outcome o;
  o.add(worst_u <= 1e-6, fmt("dC/dU rel err %.2e", worst_u));
  o.add(worst_x <= 1e-6, fmt("dC/dX rel err %.2e", worst_x));
  o.add(worst_c <= 1e-6, fmt("FFF variance rel err %.2e", worst_c));
  return o;
}

Outcome criterion5() {
  double worst_l2 = 0.0, worst_l1 = 0.0, worst_stat = 0.0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    std::mt19937_64 rng(4000 + seed);
    const int n = 2 + static_cast<int>(seed % 3), n_t = 1 + static_cast<int>((seed / 3) % 3);
    const auto set = random_symmetric_set(n, 4000 + seed);
    std::vector<Mat> u, z0;
    for (int t = 0; t < n_t; ++t) {
      u.push_back(testing::random_rotation(n, rng));
      z0.push_back(testing::random_symmetric(n, rng));
    }
    for (double rho : {0.0, 1e-3}) {
      RegularizationConfig reg;
      reg.rho = rho;
      const auto zs = solve_z_l2(u, set.eri, reg, {});
      worst_l2 = std::max(worst_l2, max_diff(zs.z, pinv_z(u, set.eri, n, rho)));
      worst_stat = std::max(worst_stat, max_abs_all(grad_z(u, zs.z, residual(u, zs.z, set.eri), reg)));
    }
    RegularizationConfig l1;
    l1.gamma = 1;
    const auto z1 = solve_z_l1(u, set.eri, l1, z0, {}, {});
    worst_l1 = std::max(worst_l1, max_diff(z1.z, pinv_z(u, set.eri, n, 0.0)));
  }
  Outcome o;
  o.add(worst_l2 <= 1e-7, fmt("L2 vs pseudo-inverse %.2e", worst_l2));
  o.add(worst_l1 <= 1e-7, fmt("L1 (rho 0) vs pseudo-inverse %.2e", worst_l1));
  o.add(worst_stat <= 1e-8, fmt("stationarity %.2e", worst_stat));
  return o;
}

Outcome criterion6(const std::vector<Fixture>& fixtures) {
  Outcome o;
  int cases = 0, bad = 0;
  double worst_ratio = 0.0;
  for (const auto& f : fixtures) {
    const int n = f.set.n;
    std::set<int> grid;
    for (int n_t : {(n + 1) / 2, n, 2 * n}) grid.insert(std::min(n_t, f.full.n_t()));
    for (int n_t : grid) {
      const auto trunc = truncate(f.full, n_t);
      const double fx = frobenius_error(trunc, f.set.eri);
      const auto rep = rcdf(f, n_t, 0.0);
      const double fr = frobenius_error(rep, f.set.eri);
      record(f.name + " xdf n_t=" + std::to_string(n_t), trunc);
      record(f.name + " rcdf(0) n_t=" + std::to_string(n_t), rep);
      ++cases;
      if (fr > fx + 1e-12) ++bad;
      if (fx > 1e-12) worst_ratio = std::max(worst_ratio, fr / fx);
    }
  }
  o.add(bad == 0, fmt("%d of %d cases dominated, largest RC-DF/X-DF ratio %.3f", cases - bad, cases, worst_ratio));
  return o;
}

Outcome criterion7(const std::vector<Fixture>& fixtures) {
  Outcome o;
  int bad = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [label, rep] : g_reps) {
    const auto r = lambda_report(rep);
    worst = std::max(worst, r.lambda_burg - r.lambda_lcu);
    if (r.lambda_burg > r.lambda_lcu + 1e-12) ++bad;
  }
  o.add(bad == 0, fmt("lambda_Burg <= lambda_LCU on %zu representations (max difference %.3g)", g_reps.size(), worst));
  double chol = 0.0;
  for (const auto& f : fixtures) {
    const double a = cholesky_df_lambda(f.set, 0.0).lambda;
    const double b = lambda_burg(f.full);
    chol = std::max(chol, std::abs(a - b));
  }
  o.add(chol <= 1e-9, fmt("untruncated Cholesky lambda vs X-DF lambda_Burg %.2e", chol));
  o.detail += "; tensor hypercontraction cross-check SKIP (tensors not bundled)";
  return o;
}

Outcome criterion8(const Fixture& h4) {
  const auto gs = fci_ground_state(h4.set, sector_of(h4));
  const std::vector<double> rhos{0.0, 1e-6, 1e-4, 1e-2};
  std::vector<double> var, bias, lam;
  MeasurementPlan plan;
  for (double rho : rhos) {
    const auto rep = rcdf(h4, 4, rho);
    record("h4 rcdf n_t=4 rho=" + fmt("%g", rho), rep);
    const auto h = build_pauli_hamiltonian(rep);
    if (plan.shots_per_basis.empty()) plan = allocate(h, Scheme::Weights, 100000);
    const auto s = estimator_stats(h, gs.state, plan, gs.energy);
    var.push_back(s.variance);
    bias.push_back(std::abs(s.bias));
    lam.push_back(lambda_lcu(rep));
  }
  bool var_ok = true, bias_ok = true;
  for (std::size_t i = 1; i < rhos.size(); ++i) {
    var_ok = var_ok && var[i] <= 1.01 * var[i - 1];
    bias_ok = bias_ok && bias[i] >= 0.99 * bias[i - 1];
  }
  Outcome o;
  o.add(var_ok, fmt("variance %.4e %.4e %.4e %.4e", var[0], var[1], var[2], var[3]));
  o.add(bias_ok, fmt("|bias| %.2e %.2e %.2e %.2e", bias[0], bias[1], bias[2], bias[3]));
  o.add(lam[3] < lam[0], fmt("lambda_LCU %.4f -> %.4f", lam[0], lam[3]));
  return o;
}

Outcome criterion9(const Fixture& h2o) {
  const long long budget = 300000;
  const auto gs = fci_ground_state(h2o.set, sector_of(h2o));
  const int full_rank = max_leaf_count(h2o.set.n);
  const std::vector<int> grid{2, 3, 4, 5, 6, 7, 14, full_rank};
  auto rmse = [&](const PauliHamiltonian& h, Scheme s, long long shots) {
    return estimator_stats(h, gs.state, allocate(h, s, shots), gs.energy).rmse;
  };
  std::string table;
  int rc_worse = 0, weighted_worse = 0;
  std::vector<PauliHamiltonian> truncated;
  PauliHamiltonian full_rcdf;
  for (int n_t : grid) {
    const auto x = truncate(h2o.full, std::min(n_t, h2o.full.n_t()));
    const auto r = rcdf(h2o, n_t, 1e-6, 2, 100);
    record("h2o rcdf(1e-6) n_t=" + std::to_string(n_t), r);
    const auto hx = build_pauli_hamiltonian(x);
    const auto hr = build_pauli_hamiltonian(r);
    if (n_t < h2o.full.n_t()) truncated.push_back(hx);
    if (n_t == full_rank) full_rcdf = hr;
    const double xw = rmse(hx, Scheme::Weights, budget), xu = rmse(hx, Scheme::Uniform, budget);
    const double rw = rmse(hr, Scheme::Weights, budget), ru = rmse(hr, Scheme::Uniform, budget);
    if (rw > xw) ++rc_worse;
    if (xw > xu) ++weighted_worse;
    if (rw > ru) ++weighted_worse;
    table += fmt(" n_t=%d X-DF %.2e/%.2e RC-DF %.2e/%.2e;", n_t, xw, xu, rw, ru);
  }
  Outcome o;
  o.add(rc_worse == 0, fmt("RC-DF sqrt(MSE) <= X-DF at %d of %zu n_t", static_cast<int>(grid.size()) - rc_worse,
                           grid.size()));
  o.add(weighted_worse == 0,
        fmt("weighted <= uniform in %d of %zu comparisons", static_cast<int>(2 * grid.size()) - weighted_worse,
            2 * grid.size()));
  const long long need = shots_to_target(full_rcdf, gs.state, gs.energy, Scheme::Weights, 1e-3);
  int missing = 0;
  for (const auto& h : truncated)
    if (rmse(h, Scheme::Weights, need) > 1e-3) ++missing;
  o.add(missing > 0, fmt("full-rank RC-DF reaches 1 mHa at %lld shots, where %d truncated X-DF do not", need, missing));
  o.detail += "; sqrt(MSE) weighted/uniform at 3e5 shots:" + table;
  return o;
}

Outcome criterion10(const std::vector<Fixture>& fixtures) {
  const int reps = 200;
  const boost::math::chi_squared dist(reps - 1);
  const double lo = boost::math::quantile(dist, 0.005), hi = boost::math::quantile(dist, 0.995);
  struct Case {
    std::string fixture;
    int n_t;
    Scheme scheme;
    long long shots;
  };
  const std::vector<Case> cases{{"h2_n2.fcidump", 0, Scheme::Uniform, 1000},
                                {"h4_n4.fcidump", 4, Scheme::Weights, 2000},
                                {"h2o_n7.fcidump", 4, Scheme::Weights, 5000}};
  Outcome o;
  std::uint64_t seed = 5000;
  for (const auto& c : cases) {
    const auto& f = *std::find_if(fixtures.begin(), fixtures.end(), [&](const Fixture& x) { return x.name == c.fixture; });
    const auto rep = c.n_t > 0 ? truncate(f.full, c.n_t) : f.full;
    const auto h = build_pauli_hamiltonian(rep);
    const auto gs = fci_ground_state(f.set, sector_of(f));
    const auto plan = allocate(h, c.scheme, c.shots);
    const auto stats = estimator_stats(h, gs.state, plan, gs.energy);
    std::vector<FockState> rotated;
    for (const auto& b : h.bases) rotated.push_back(rotate_orbitals(gs.state, b.rotation));
    std::vector<double> est;
    for (int r = 0; r < reps; ++r) {
      double e = h.constant;
      for (std::size_t b = 0; b < h.bases.size(); ++b) {
        if (plan.shots_per_basis[b] == 0) continue;
        e += sample_basis(rotated[b], h.bases[b], plan.shots_per_basis[b], seed++).mean;
      }
      est.push_back(e);
    }
    const double mean = std::accumulate(est.begin(), est.end(), 0.0) / reps;
    double ss = 0.0;
    for (double e : est) ss += (e - mean) * (e - mean);
    const double stat = ss / stats.variance;
    o.add(stat >= lo && stat <= hi, fmt("%s: (R-1)s^2/sigma^2 = %.1f in [%.1f, %.1f]", c.fixture.c_str(), stat, lo, hi));
  }
  return o;
}

Outcome criterion11(const std::vector<Fixture>& fixtures) {
  Outcome o;
  double worst_op = 0.0, worst_blocks = 0.0;
  std::mt19937_64 rng(6000);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const auto set = random_symmetric_set(n, 6000 + seed);
    const auto rep = xdf_factorize(set);
    const Mat c = testing::random_matrix(rep.n_t(), n, rng, 2.0);
    const Mat a = dense_pauli_hamiltonian(build_fff_hamiltonian(set, rep, c));
    worst_op = std::max(worst_op, (a - testing::jw_oracle(set)).cwiseAbs().maxCoeff());

    const auto plain = build_pauli_hamiltonian(rep);
    const auto eq6 = build_fff_hamiltonian(set, rep, fff_eq6_coefficients(rep));
    worst_blocks = std::max(worst_blocks, std::abs(plain.constant - eq6.constant));
    for (std::size_t b = 0; b < plain.bases.size(); ++b) {
      const auto& p = plain.bases[b];
      const auto& q = eq6.bases[b];
      const Mat pd = p.rotation * p.linear(Eigen::seq(0, Eigen::last, 2)).asDiagonal() * p.rotation.transpose();
      const Mat qd = q.rotation * q.linear(Eigen::seq(0, Eigen::last, 2)).asDiagonal() * q.rotation.transpose();
      worst_blocks = std::max(worst_blocks, (pd - qd).cwiseAbs().maxCoeff());
      worst_blocks = std::max(worst_blocks, (p.quadratic - q.quadratic).cwiseAbs().maxCoeff());
    }
  }
  o.add(worst_op <= 1e-9, fmt("operator vs dense oracle %.2e", worst_op));
  o.add(worst_blocks <= 1e-10, fmt("row-sum coefficients vs plain blocks %.2e", worst_blocks));

  for (const char* name : {"h4_n4.fcidump", "h2o_n7.fcidump"}) {
    const auto& f = *std::find_if(fixtures.begin(), fixtures.end(), [&](const Fixture& x) { return x.name == name; });
    const auto rep = truncate(f.full, 4);
    const auto gs = fci_ground_state(f.set, sector_of(f));
    const FffModel model(f.set, rep, gs.state);
    const double zero = fff_shots_to_target(model, fff_initial(rep, FffInit::Zero), 1e-3);
    const double eq6 = fff_shots_to_target(model, fff_initial(rep, FffInit::Eq6), 1e-3);
    const auto res = fff_optimize(f.set, rep, fff_initial(rep, FffInit::Random, 7), gs.state, 100000);
    o.add(res.shots_to_target <= std::min(zero, eq6) * (1 + 1e-12),
          fmt("%s shots to 1 mHa: optimized %.4g, zero %.4g, row-sum %.4g", name, res.shots_to_target, zero, eq6));
    const double gain = exchange_gain(model.block_variances(res.c), res.plan.shots_per_basis);
    o.add(gain <= 1e-12, fmt("%s best single-shot exchange gain %.1e", name, gain));
  }
  return o;
}

Outcome criterion12(const std::vector<Fixture>& fixtures) {
  Outcome o;
  for (const char* name : {"hchain4_sto6g.fcidump", "hchain6_sto6g.fcidump", "hchain8_sto6g.fcidump"}) {
    const auto& f = *std::find_if(fixtures.begin(), fixtures.end(), [&](const Fixture& x) { return x.name == name; });
    const int n_t = (f.set.n + 1) / 2;
    const auto t0 = Clock::now();
    const auto rep = rcdf(f, n_t, 5e-5);
    const double dt = seconds_since(t0);
    record(f.name + " rcdf(5e-5)", rep);
    const double lr = lambda_burg(rep), lx = lambda_burg(f.full);
    o.add(dt < 300.0 && lr < lx, fmt("n=%d n_t=%d: %.1f s, lambda_Burg %.3f vs full X-DF %.3f", f.set.n, n_t, dt, lr, lx));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: dfkit_acceptance [--expect-fail N]...\n";
      return 2;
    }
  }

  std::vector<Fixture> fixtures;
  for (const char* name : {"h2_n1.fcidump", "h2_n2.fcidump", "h4_n4.fcidump", "h2o_n7.fcidump",
                           "hchain4_sto6g.fcidump", "hchain6_sto6g.fcidump", "hchain8_sto6g.fcidump"})
    fixtures.push_back(load(name));
  auto fixture = [&](const std::string& name) -> const Fixture& {
    return *std::find_if(fixtures.begin(), fixtures.end(), [&](const Fixture& f) { return f.name == name; });
  };

  // Criterion 7 runs last so it sees every representation built by the others.
  std::map<int, std::function<Outcome()>> checks{
      {1, criterion1},
      {2, criterion2},
      {3, criterion3},
      {4, criterion4},
      {5, criterion5},
      {6, [&] { return criterion6(fixtures); }},
      {8, [&] { return criterion8(fixture("h4_n4.fcidump")); }},
      {9, [&] { return criterion9(fixture("h2o_n7.fcidump")); }},
      {10, [&] { return criterion10(fixtures); }},
      {11, [&] { return criterion11(fixtures); }},
      {12, [&] { return criterion12(fixtures); }},
      {7, [&] { return criterion7(fixtures); }},
  };
  std::map<int, Outcome> results;
  std::map<int, double> times;
  for (int id : {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 7}) {
    const auto t0 = Clock::now();
    try {
      results[id] = checks[id]();
    } catch (const std::exception& e) {
      results[id] = {false, std::string("error: ") + e.what()};
    }
    times[id] = seconds_since(t0);
    std::cerr << "criterion " << id << " done in " << fmt("%.1f", times[id]) << " s\n";
  }

  int unexpected = 0;
  for (const auto& [id, r] : results) {
    std::string tag = r.pass ? "PASS" : "FAIL";
    if (!r.pass && expected.count(id)) tag += " (known)";
    if (!r.pass && !expected.count(id)) ++unexpected;
    if (r.pass && expected.count(id)) ++unexpected;
    std::cout << fmt("criterion %2d: ", id) << tag << "  " << r.detail << fmt(" (%.1f s)", times[id]) << '\n';
  }
  return unexpected == 0 ? 0 : 1;
}
