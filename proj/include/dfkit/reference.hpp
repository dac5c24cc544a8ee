// Copyright 2026 The dfkit Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file reference.hpp
 * @brief Exact classical reference: Jordan-Wigner statevectors, full CI in a
 *        particle-number sector, orbital rotations and diagonal moments.
 *
 * A FockState holds 4^n amplitudes indexed by a 2n-bit string; bit j is
 * qubit j, qubit 2k is spin-up orbital k and qubit 2k+1 spin-down orbital k.
 * Creation operators carry the sign (-1)^(number of occupied qubits below).
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>

#include <Eigen/Dense>

#include "dfkit/integrals.hpp"
#include "dfkit/lcu.hpp"

namespace dfkit {

struct FockState {
  int n = 0;
  Eigen::VectorXcd amplitudes;

  static FockState basis(int n, std::uint64_t bits);
  double norm() const { return amplitudes.norm(); }
};

struct SectorSpec {
  int n_alpha = 0;
  int n_beta = 0;
};

enum class SpinTarget { Lowest, Singlet, Triplet };

constexpr int kMaxDenseOrbitals = 4;
constexpr int kMaxFciOrbitals = 8;

/// H|psi> for the second-quantized Hamiltonian of `set`.
FockState apply_hamiltonian(const IntegralSet& set, const FockState& psi);

/// E_pq|psi> = sum_sigma a^dagger_{p sigma} a_{q sigma} |psi>.
FockState apply_excitation(const FockState& psi, int p, int q);

/// <psi|H|psi> for the exact integrals.
double expectation(const IntegralSet& set, const FockState& psi);

/// Dense 4^n x 4^n Jordan-Wigner matrix; BoundsError for n > 4.
Mat dense_hamiltonian(const IntegralSet& set);

/// Dense matrix of a Pauli-form Hamiltonian; BoundsError for n > 4.
Mat dense_pauli_hamiltonian(const PauliHamiltonian& h);

struct FciResult {
  double energy = 0.0;
  double s_squared = 0.0;
  FockState state;
};

/// Lowest eigenpair in the sector with the requested spin. Throws SearchError
/// when the spin is absent from the lowest ten sector states.
FciResult fci_ground_state(const IntegralSet& set, const SectorSpec& sector, SpinTarget which = SpinTarget::Lowest);

/// <psi|S^2|psi>.
double spin_squared(const FockState& psi);

/// Applies the one-body rotation G(u)^dagger, after which Z measurements read
/// the number operators of the orbitals u_{:,k}. PreconditionError if u is
/// not orthogonal within 1e-10.
FockState rotate_orbitals(const FockState& psi, const Mat& u);

/// f(bits) = linear . z + z^T quadratic z with z_j = 1 - 2 * bit_j.
double block_value(const MeasurementBasis& block, std::uint64_t bits);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact moments of the block's diagonal observable; `psi` must already be
/// rotated into the block's basis.
Moments diagonal_moments(const FockState& psi, const MeasurementBasis& block);

/// Sample mean and unbiased sample variance over `shots` draws.
Moments sample_basis(const FockState& psi, const MeasurementBasis& block, long long shots, std::uint64_t seed);

/// Length-prefixed little-endian doubles, interleaved re/im.
void write_state(std::ostream& out, const FockState& psi);
FockState read_state(std::istream& in);

}  // namespace dfkit
