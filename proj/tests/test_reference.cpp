// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <bit>
#include <cmath>
#include <complex>
#include <random>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dfkit/errors.hpp"
#include "dfkit/lcu.hpp"
#include "dfkit/reference.hpp"
#include "dfkit/xdf.hpp"
#include "support.hpp"

using namespace dfkit;

namespace {

FockState random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  FockState psi;
  psi.n = n;
  psi.amplitudes.resize(Eigen::Index{1} << (2 * n));
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) psi.amplitudes(i) = {d(rng), d(rng)};
  psi.amplitudes.normalize();
  return psi;
}

nlohmann::json reference_energies() {
  std::ifstream in(testing::data_path("reference_energies.json"));
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("Hamiltonian action matches the dense oracle") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 3; ++n) {
    const auto set = random_symmetric_set(n, 40 + n);
    const Mat h = testing::jw_oracle(set);
    const auto psi = random_state(n, rng);
    const Eigen::VectorXcd expected = h.cast<std::complex<double>>() * psi.amplitudes;
    CHECK((apply_hamiltonian(set, psi).amplitudes - expected).norm() < 1e-10);
    CHECK(expectation(set, psi) == doctest::Approx(psi.amplitudes.dot(expected).real()).epsilon(1e-12));
  }
}

TEST_CASE("dense Hamiltonian conserves particle number") {
  const auto set = random_symmetric_set(2, 3);
  const Mat h = dense_hamiltonian(set);
  Mat num = Mat::Zero(h.rows(), h.cols());
  for (Eigen::Index b = 0; b < h.rows(); ++b) num(b, b) = std::popcount(static_cast<std::uint64_t>(b));
  CHECK((h * num - num * h).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(dense_hamiltonian(random_symmetric_set(5, 1)), BoundsError);
}

TEST_CASE("zero integrals give the core energy") {
  auto set = IntegralSet::zeros(2);
  set.e_core = 0.25;
  CHECK(fci_ground_state(set, {1, 1}).energy == doctest::Approx(0.25));
}

TEST_CASE("full CI reproduces the fixture energies") {
  const auto ref = reference_energies();
  for (const auto& [name, e] : ref.items()) {
    const auto p = read_fcidump(testing::data_path(name));
    if (p.integrals.n > 7) continue;
    const int na = p.header.nelec / 2;
    const SectorSpec sector{na, p.header.nelec - na};
    const auto g = fci_ground_state(p.integrals, sector);
    CHECK(g.energy == doctest::Approx(e["ground"].get<double>()).epsilon(1e-9));
    CHECK(g.state.norm() == doctest::Approx(1.0));
    const auto s = fci_ground_state(p.integrals, sector, SpinTarget::Singlet);
    CHECK(s.energy == doctest::Approx(e["singlet"].get<double>()).epsilon(1e-9));
    CHECK(std::abs(s.s_squared) < 1e-6);
    if (e.contains("triplet") && p.integrals.n <= 4) {
      const auto t = fci_ground_state(p.integrals, sector, SpinTarget::Triplet);
      CHECK(t.energy == doctest::Approx(e["triplet"].get<double>()).epsilon(1e-9));
      CHECK(t.s_squared == doctest::Approx(2.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("ground state agrees with the dense sector block") {
  const auto set = read_fcidump(testing::data_path("h2_n2.fcidump")).integrals;
  const Mat h = testing::jw_oracle(set);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index b = 0; b < h.rows(); ++b) {
    const auto bits = static_cast<std::uint64_t>(b);
    if (std::popcount(bits & 0x5) == 1 && std::popcount(bits & 0xA) == 1) idx.push_back(b);
  }
  Mat block(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) block(i, j) = h(idx[i], idx[j]);
  Eigen::SelfAdjointEigenSolver<Mat> es(block);
  CHECK(fci_ground_state(set, {1, 1}).energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("orbital rotation of a single particle") {
  const double theta = 0.3;
  Mat u(2, 2);
  u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const auto psi = FockState::basis(2, 0b0001);
  const auto out = rotate_orbitals(psi, u.transpose());
  CHECK(std::abs(out.amplitudes(0b0001)) == doctest::Approx(std::cos(theta)));
  CHECK(std::abs(out.amplitudes(0b0100)) == doctest::Approx(std::sin(theta)));
  CHECK(out.norm() == doctest::Approx(1.0));
}

TEST_CASE("orbital rotations are unitary and invertible") {
  std::mt19937_64 rng(2);
  const auto a = random_state(3, rng);
  const auto b = random_state(3, rng);
  const Mat u = testing::random_rotation(3, rng);
  const auto ra = rotate_orbitals(a, u);
  const auto rb = rotate_orbitals(b, u);
  CHECK(std::abs(ra.amplitudes.dot(rb.amplitudes) - a.amplitudes.dot(b.amplitudes)) < 1e-10);
  CHECK((rotate_orbitals(ra, u.transpose()).amplitudes - a.amplitudes).norm() < 1e-10);
  CHECK((rotate_orbitals(a, Mat::Identity(3, 3)).amplitudes - a.amplitudes).norm() < 1e-14);
  CHECK_THROWS_AS(rotate_orbitals(a, 2.0 * u), PreconditionError);
}

TEST_CASE("rotated number operators are read by Z measurements") {
  std::mt19937_64 rng(3);
  const int n = 2;
  const auto psi = random_state(n, rng);
  const Mat u = testing::random_rotation(n, rng);
  const auto rotated = rotate_orbitals(psi, u);
  for (int k = 0; k < n; ++k) {
    double occ = 0.0;
    for (Eigen::Index b = 0; b < rotated.amplitudes.size(); ++b)
      if ((b >> (2 * k)) & 1) occ += std::norm(rotated.amplitudes(b));
    std::complex<double> direct = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const Mat a_p = testing::jw_annihilation(2 * n, 2 * p), a_q = testing::jw_annihilation(2 * n, 2 * q);
        const Mat op = a_p.transpose() * a_q;
        direct += u(p, k) * u(q, k) * psi.amplitudes.dot(op.cast<std::complex<double>>() * psi.amplitudes);
      }
    CHECK(occ == doctest::Approx(direct.real()).epsilon(1e-10));
  }
}

TEST_CASE("diagonal moments") {
  MeasurementBasis block{Mat::Identity(1, 1), Vec::Zero(2), Mat::Zero(2, 2)};
  block.linear << 1.0, 0.0;
  const auto basis = FockState::basis(1, 0b01);
  const auto m = diagonal_moments(basis, block);
  CHECK(m.mean == doctest::Approx(-1.0));
  CHECK(m.variance == doctest::Approx(0.0));

  FockState sup;
  sup.n = 1;
  sup.amplitudes = Eigen::VectorXcd::Zero(4);
  sup.amplitudes(0) = sup.amplitudes(1) = std::sqrt(0.5);
  const auto s = diagonal_moments(sup, block);
  CHECK(s.mean == doctest::Approx(0.0));
  CHECK(s.variance == doctest::Approx(1.0));
}

TEST_CASE("block means add up to the Pauli-form energy") {
  std::mt19937_64 rng(4);
  const auto set = random_symmetric_set(3, 8);
  const auto h = build_pauli_hamiltonian(truncate(xdf_factorize(set), 2));
  const Mat dense = dense_pauli_hamiltonian(h);
  const auto psi = random_state(3, rng);
  double total = h.constant;
  for (const auto& b : h.bases) total += diagonal_moments(rotate_orbitals(psi, b.rotation), b).mean;
  const double direct = psi.amplitudes.dot(dense.cast<std::complex<double>>() * psi.amplitudes).real();
  CHECK(total == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("sampling agrees with exact moments") {
  std::mt19937_64 rng(5);
  const auto psi = random_state(2, rng);
  MeasurementBasis block{Mat::Identity(2, 2), testing::random_matrix(4, 1, rng), testing::random_symmetric(4, rng)};
  block.quadratic.diagonal().setZero();
  const auto exact = diagonal_moments(psi, block);
  const long long shots = 100000;
  const auto s = sample_basis(psi, block, shots, 17);
  CHECK(std::abs(s.mean - exact.mean) < 5.0 * std::sqrt(exact.variance / shots));
  const auto again = sample_basis(psi, block, shots, 17);
  CHECK(again.mean == s.mean);
  CHECK(again.variance == s.variance);

  const auto one = sample_basis(FockState::basis(2, 0b0110), block, 1, 3);
  CHECK(one.mean == doctest::Approx(block_value(block, 0b0110)));
  CHECK(one.variance == 0.0);
}

TEST_CASE("state sidecar round trip") {
  std::mt19937_64 rng(6);
  const auto psi = random_state(2, rng);
  std::stringstream buf;
  write_state(buf, psi);
  const auto back = read_state(buf);
  CHECK(back.amplitudes == psi.amplitudes);
}
