// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "dfkit/reference.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dfkit/errors.hpp"
#include "dfkit/linalg.hpp"

namespace dfkit {

namespace {

using Bits = std::uint64_t;
using cplx = std::complex<double>;

constexpr int kSpinSearchDepth = 10;
constexpr double kSpinTol = 1e-6;

std::size_t dimension(int n) { return std::size_t{1} << (2 * n); }

double parity_below(Bits b, int qubit) { return (std::popcount(b & ((Bits{1} << qubit) - 1)) & 1) ? -1.0 : 1.0; }

// a^dagger_P a_Q |b>; returns false when the result vanishes.
bool hop(Bits b, int p, int q, Bits& out, double& sign) {
  if (!((b >> q) & 1)) return false;
  const Bits b1 = b ^ (Bits{1} << q);
  if ((b1 >> p) & 1) return false;
  sign = parity_below(b, q) * parity_below(b1, p);
  out = b1 | (Bits{1} << p);
  return true;
}

Mat kappa(const IntegralSet& set) {
  Mat k = set.h_one;
  for (int p = 0; p < set.n; ++p)
    for (int s = 0; s < set.n; ++s)
      for (int q = 0; q < set.n; ++q) k(p, s) -= 0.5 * set.two(p, q, q, s);
  return k;
}

// Visits every nonzero term <b'|H|b> c for basis string b.
template <typename Visit>
void hamiltonian_column(const IntegralSet& set, const Mat& k, Bits b, Visit&& visit) {
  const int n = set.n;
  visit(b, set.e_core);
  for (int sigma = 0; sigma < 2; ++sigma)
    for (int p = 0; p < n; ++p)
      for (int s = 0; s < n; ++s) {
        if (k(p, s) == 0.0) continue;
        Bits out;
        double sign;
        if (hop(b, 2 * p + sigma, 2 * s + sigma, out, sign)) visit(out, sign * k(p, s));
      }
  for (int tau = 0; tau < 2; ++tau)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) {
        Bits mid;
        double sign1;
        if (!hop(b, 2 * r + tau, 2 * s + tau, mid, sign1)) continue;
        for (int sigma = 0; sigma < 2; ++sigma)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              const double v = set.two(p, q, r, s);
              if (v == 0.0) continue;
              Bits out;
              double sign2;
              if (hop(mid, 2 * p + sigma, 2 * q + sigma, out, sign2)) visit(out, 0.5 * v * sign1 * sign2);
            }
      }
}

void apply_givens(Eigen::VectorXcd& amp, int p, int q, double c, double s) {
  const Bits bp = Bits{1} << p, bq = Bits{1} << q;
  const Bits between = (bq - 1) & ~((bp << 1) - 1);
  for (Bits b = 0; b < static_cast<Bits>(amp.size()); ++b) {
    if (!(b & bp) || (b & bq)) continue;
    const Bits b2 = b ^ bp ^ bq;
    const double sg = (std::popcount(b & between) & 1) ? -1.0 : 1.0;
    const cplx x = amp(static_cast<Eigen::Index>(b)), y = amp(static_cast<Eigen::Index>(b2));
    amp(static_cast<Eigen::Index>(b)) = c * x - sg * s * y;
    amp(static_cast<Eigen::Index>(b2)) = sg * s * x + c * y;
  }
}

// G(v) psi for orthogonal v, through v = G_1 ... G_m D with adjacent-plane Givens factors.
void apply_one_body_rotation(Eigen::VectorXcd& amp, int n, const Mat& v) {
  struct Rot {
    int a;
    double c, s;
  };
  std::vector<Rot> rots;
  Mat w = v;
  for (int j = 0; j < n; ++j)
    for (int i = n - 1; i > j; --i) {
      const double xa = w(i - 1, j), xb = w(i, j);
      if (xb == 0.0) continue;
      const double r = std::hypot(xa, xb);
      const double c = xa / r, s = xb / r;
      const Eigen::RowVectorXd ra = w.row(i - 1), rb = w.row(i);
      w.row(i - 1) = c * ra + s * rb;
      w.row(i) = -s * ra + c * rb;
      rots.push_back({i - 1, c, s});
    }
  for (int k = 0; k < n; ++k) {
    if (w(k, k) > 0) continue;
    const Bits mask = Bits{3} << (2 * k);
    for (Bits b = 0; b < static_cast<Bits>(amp.size()); ++b)
      if (std::popcount(b & mask) == 1) amp(static_cast<Eigen::Index>(b)) *= -1.0;
  }
  for (auto it = rots.rbegin(); it != rots.rend(); ++it)
    for (int sigma = 0; sigma < 2; ++sigma) apply_givens(amp, 2 * it->a + sigma, 2 * (it->a + 1) + sigma, it->c, it->s);
}

Eigen::VectorXcd apply_s_plus(const Eigen::VectorXcd& amp, int n) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amp.size());
  for (Bits b = 0; b < static_cast<Bits>(amp.size()); ++b) {
    const cplx a = amp(static_cast<Eigen::Index>(b));
    if (a == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      Bits out_b;
      double sign;
      if (hop(b, 2 * k, 2 * k + 1, out_b, sign)) out(static_cast<Eigen::Index>(out_b)) += sign * a;
    }
  }
  return out;
}

void fix_phase(Eigen::VectorXcd& amp) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < amp.size(); ++i)
    if (std::abs(amp(i)) > mag + 1e-12) {
      mag = std::abs(amp(i));
      best = i;
    }
  if (mag > 0) amp *= std::conj(amp(best)) / mag;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), 8);
  if (!in) throw ParseError("truncated state file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

FockState FockState::basis(int n, std::uint64_t bits) {
  FockState s;
  s.n = n;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension(n)));
  s.amplitudes(static_cast<Eigen::Index>(bits)) = 1.0;
  return s;
}

FockState apply_hamiltonian(const IntegralSet& set, const FockState& psi) {
  const Mat k = kappa(set);
  FockState out;
  out.n = psi.n;
  out.amplitudes = Eigen::VectorXcd::Zero(psi.amplitudes.size());
  for (Bits b = 0; b < static_cast<Bits>(psi.amplitudes.size()); ++b) {
    const cplx a = psi.amplitudes(static_cast<Eigen::Index>(b));
    if (a == 0.0) continue;
    hamiltonian_column(set, k, b, [&](Bits to, double v) { out.amplitudes(static_cast<Eigen::Index>(to)) += v * a; });
  }
  return out;
}

FockState apply_excitation(const FockState& psi, int p, int q) {
  FockState out;
  out.n = psi.n;
  out.amplitudes = Eigen::VectorXcd::Zero(psi.amplitudes.size());
  for (Bits b = 0; b < static_cast<Bits>(psi.amplitudes.size()); ++b) {
    const cplx a = psi.amplitudes(static_cast<Eigen::Index>(b));
    if (a == 0.0) continue;
    for (int sigma = 0; sigma < 2; ++sigma) {
      Bits to;
      double sign;
      if (hop(b, 2 * p + sigma, 2 * q + sigma, to, sign)) out.amplitudes(static_cast<Eigen::Index>(to)) += sign * a;
    }
  }
  return out;
}

double expectation(const IntegralSet& set, const FockState& psi) {
  return psi.amplitudes.dot(apply_hamiltonian(set, psi).amplitudes).real();
}

Mat dense_hamiltonian(const IntegralSet& set) {
  if (set.n > kMaxDenseOrbitals) {
    throw BoundsError("dense Hamiltonian limited to " + std::to_string(kMaxDenseOrbitals) + " orbitals");
  }
  const Mat k = kappa(set);
  const auto dim = static_cast<Eigen::Index>(dimension(set.n));
  Mat h = Mat::Zero(dim, dim);
  for (Bits b = 0; b < static_cast<Bits>(dim); ++b)
    hamiltonian_column(set, k, b, [&](Bits to, double v) { h(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(b)) += v; });
  return h;
}

Mat dense_pauli_hamiltonian(const PauliHamiltonian& h) {
  if (h.n > kMaxDenseOrbitals) {
    throw BoundsError("dense Hamiltonian limited to " + std::to_string(kMaxDenseOrbitals) + " orbitals");
  }
  const auto dim = static_cast<Eigen::Index>(dimension(h.n));
  Mat out = h.constant * Mat::Identity(dim, dim);
  for (const auto& block : h.bases) {
    Mat r(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
      r.col(j) = rotate_orbitals(FockState::basis(h.n, static_cast<Bits>(j)), block.rotation).amplitudes.real();
    Vec f(dim);
    for (Eigen::Index b = 0; b < dim; ++b) f(b) = block_value(block, static_cast<Bits>(b));
    out.noalias() += r.transpose() * f.asDiagonal() * r;
  }
  return out;
}

double spin_squared(const FockState& psi) {
  double sz = 0.0, sz2 = 0.0;
  for (Bits b = 0; b < static_cast<Bits>(psi.amplitudes.size()); ++b) {
    const double p = std::norm(psi.amplitudes(static_cast<Eigen::Index>(b)));
    if (p == 0.0) continue;
    const double m = 0.5 * (std::popcount(b & 0x5555555555555555ULL) - std::popcount(b & 0xAAAAAAAAAAAAAAAAULL));
    sz += p * m;
    sz2 += p * m * m;
  }
  return apply_s_plus(psi.amplitudes, psi.n).squaredNorm() + sz2 + sz;
}

FciResult fci_ground_state(const IntegralSet& set, const SectorSpec& sector, SpinTarget which) {
  const int n = set.n;
  if (n > kMaxFciOrbitals) throw BoundsError("full CI limited to " + std::to_string(kMaxFciOrbitals) + " orbitals");
  if (sector.n_alpha < 0 || sector.n_beta < 0 || sector.n_alpha > n || sector.n_beta > n) {
    throw BoundsError("sector occupation outside [0, n]");
  }
  const auto dim = dimension(n);
  std::vector<Bits> basis;
  std::vector<int> index(dim, -1);
  for (Bits b = 0; b < dim; ++b) {
    if (std::popcount(b & 0x5555555555555555ULL) == sector.n_alpha &&
        std::popcount(b & 0xAAAAAAAAAAAAAAAAULL) == sector.n_beta) {
      index[b] = static_cast<int>(basis.size());
      basis.push_back(b);
    }
  }
  const auto m = static_cast<Eigen::Index>(basis.size());
  const Mat k = kappa(set);
  Mat h = Mat::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    hamiltonian_column(set, k, basis[j], [&](Bits to, double v) { h(index[to], j) += v; });
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.transpose()));
  const Vec& e = es.eigenvalues();

  auto expand = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < m; ++i) full(static_cast<Eigen::Index>(basis[i])) = v(i);
    return full;
  };
  const double sz = 0.5 * (sector.n_alpha - sector.n_beta);

  const Eigen::Index depth = std::min<Eigen::Index>(kSpinSearchDepth, m);
  for (Eigen::Index start = 0; start < depth;) {
    Eigen::Index end = start + 1;
    const double tol = 1e-8 * std::max(1.0, std::abs(e(start)));
    while (end < m && e(end) - e(start) <= tol) ++end;
    const auto g = end - start;
    std::vector<Eigen::VectorXcd> group;
    for (Eigen::Index i = start; i < end; ++i) group.push_back(expand(es.eigenvectors().col(i).cast<cplx>()));
    std::vector<Eigen::VectorXcd> raised;
    for (const auto& v : group) raised.push_back(apply_s_plus(v, n));
    Eigen::MatrixXcd s2(g, g);
    for (Eigen::Index a = 0; a < g; ++a)
      for (Eigen::Index b = 0; b < g; ++b) s2(a, b) = raised[a].dot(raised[b]) + (a == b ? sz * (sz + 1) : 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ss(s2);
    for (Eigen::Index c = 0; c < g; ++c) {
      const double s_val = ss.eigenvalues()(c);
      const bool ok = which == SpinTarget::Lowest || (which == SpinTarget::Singlet && std::abs(s_val) <= kSpinTol) ||
                      (which == SpinTarget::Triplet && std::abs(s_val - 2.0) <= kSpinTol);
      if (!ok) continue;
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
      for (Eigen::Index a = 0; a < g; ++a) v += ss.eigenvectors()(a, c) * group[a];
      v.normalize();
      fix_phase(v);
      FciResult r;
      r.energy = e(start);
      r.s_squared = s_val;
      r.state.n = n;
      r.state.amplitudes = std::move(v);
      return r;
    }
    start = end;
  }
  throw SearchError(std::string("requested spin state not found among the lowest ") +
                    std::to_string(kSpinSearchDepth) + " sector states");
}

FockState rotate_orbitals(const FockState& psi, const Mat& u) {
  if (u.rows() != psi.n || u.cols() != psi.n || orthogonality_error(u) > 1e-10) {
    throw PreconditionError("orbital rotation is not orthogonal");
  }
  FockState out = psi;
  apply_one_body_rotation(out.amplitudes, psi.n, u.transpose());
  return out;
}

double block_value(const MeasurementBasis& block, std::uint64_t bits) {
  const auto m = block.linear.size();
  double f = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double zi = ((bits >> i) & 1) ? -1.0 : 1.0;
    f += block.linear(i) * zi;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (block.quadratic(i, j) == 0.0) continue;
      const double zj = ((bits >> j) & 1) ? -1.0 : 1.0;
      f += block.quadratic(i, j) * zi * zj;
    }
  }
  return f;
}

Moments diagonal_moments(const FockState& psi, const MeasurementBasis& block) {
  std::vector<std::pair<double, double>> terms;
  for (Bits b = 0; b < static_cast<Bits>(psi.amplitudes.size()); ++b) {
    const double p = std::norm(psi.amplitudes(static_cast<Eigen::Index>(b)));
    if (p > 0.0) terms.emplace_back(p, block_value(block, b));
  }
  Moments m;
  for (const auto& [p, f] : terms) m.mean += p * f;
  for (const auto& [p, f] : terms) m.variance += p * (f - m.mean) * (f - m.mean);
  return m;
}

Moments sample_basis(const FockState& psi, const MeasurementBasis& block, long long shots, std::uint64_t seed) {
  if (shots < 1) throw PreconditionError("shots must be at least 1");
  std::vector<double> cdf, values;
  double total = 0.0;
  for (Bits b = 0; b < static_cast<Bits>(psi.amplitudes.size()); ++b) {
    const double p = std::norm(psi.amplitudes(static_cast<Eigen::Index>(b)));
    if (p <= 0.0) continue;
    total += p;
    cdf.push_back(total);
    values.push_back(block_value(block, b));
  }
  std::mt19937_64 rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (long long i = 0; i < shots; ++i) {
    const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    if (it == cdf.end()) --it;
    const double f = values[static_cast<std::size_t>(it - cdf.begin())];
    const double d = f - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (f - mean);
  }
  return {mean, shots > 1 ? m2 / static_cast<double>(shots - 1) : 0.0};
}

void write_state(std::ostream& out, const FockState& psi) {
  put_u64(out, static_cast<std::uint64_t>(psi.amplitudes.size()));
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    for (double v : {psi.amplitudes(i).real(), psi.amplitudes(i).imag()}) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

FockState read_state(std::istream& in) {
  const std::uint64_t count = get_u64(in);
  int n = 0;
  while ((std::uint64_t{1} << (2 * n)) < count && n < 31) ++n;
  if ((std::uint64_t{1} << (2 * n)) != count) throw ParseError("state length is not a power of four");
  FockState s;
  s.n = n;
  s.amplitudes.resize(static_cast<Eigen::Index>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    const double re = std::bit_cast<double>(get_u64(in));
    const double im = std::bit_cast<double>(get_u64(in));
    s.amplitudes(static_cast<Eigen::Index>(i)) = {re, im};
  }
  return s;
}

}  // namespace dfkit
