// Copyright 2026 The Infersense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "infersense/pauli.h"

namespace infersense {

using Matrix2 = std::array<Complex, 4>;  // row-major

/// Dense n-qubit state: a statevector (pure) or a density matrix (mixed).
///
/// A density matrix is stored as a flat vector over 2n bits, entry
/// rho(r, c) at index r + (c << n). Operators acting on the left touch the
/// low n bits; right multiplication by U^dagger acts as conj(U) on the high n
/// bits. This lets both kinds share the same bit-level kernels.
class QuantumState {
 public:
  enum class Kind { pure, mixed };

  /// |0...0>, pure or as a density matrix.
  static QuantumState zero(std::size_t num_qubits, Kind kind = Kind::pure);
  /// Validates normalization within 1e-12.
  static QuantumState from_amplitudes(std::vector<Complex> amplitudes);
  /// Row-major 2^n x 2^n matrix; validates Hermiticity, trace and
  /// positivity.
  static QuantumState from_density_matrix(std::size_t num_qubits,
                                          std::span<const Complex> row_major);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::pure; }
  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << num_qubits_; }

  /// Pure-state amplitude (pure only).
  Complex amplitude(std::uint64_t basis) const;
  /// Density-matrix entry; for pure states psi_r conj(psi_c).
  Complex rho(std::uint64_t row, std::uint64_t col) const;

  QuantumState to_mixed() const;

  void apply_matrix(const Matrix2& u, std::size_t qubit);
  void apply_cnot(std::size_t control, std::size_t target);
  /// exp(-i angle P / 2).
  void apply_pauli_rotation(const PauliString& generator, double angle);
  /// rho -> (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z) on one qubit.
  /// Mixed states only.
  void apply_depolarizing(std::size_t qubit, double probability);
  /// rho -> (1-p) rho + p I / 2^n. Mixed states only.
  void apply_global_depolarizing(double probability);

  /// Tr[rho P] including the string's sign.
  double expectation(const PauliString& p) const;
  double expectation(const Observable& o) const;
  /// Tr[rho O^2].
  double expectation_of_square(const Observable& o) const;

  /// Computational-basis outcome probabilities, clamped at zero.
  std::vector<double> probabilities() const;

  double trace() const;
  /// Largest |rho(r,c) - conj(rho(c,r))| for mixed states, zero for pure.
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  QuantumState(std::size_t num_qubits, Kind kind, std::vector<Complex> data);

  void check_qubit(std::size_t qubit) const;
  void require_mixed(const char* what) const;

  std::size_t num_qubits_ = 0;
  Kind kind_ = Kind::pure;
  std::vector<Complex> data_;
};

namespace gates {

Matrix2 hadamard();
Matrix2 pauli_x();
Matrix2 rx(double angle);
Matrix2 ry(double angle);
Matrix2 rz(double angle);
Matrix2 s_dagger();
Matrix2 multiply(const Matrix2& a, const Matrix2& b);

}  // namespace gates

}  // namespace infersense
