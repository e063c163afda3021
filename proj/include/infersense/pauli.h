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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infersense {

using Complex = std::complex<double>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);

/// A tensor product of single-qubit Paulis with a real sign.
///
/// Letter k acts on qubit k, and qubit k is bit k of a computational basis
/// index. The text form is an optional sign followed by one letter per
/// qubit, e.g. "+XZI" or "-ZZ"; '_' is accepted as an identity letter.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters, int sign = +1);

  static PauliString from_str(std::string_view text);
  static PauliString identity(std::size_t num_qubits);
  static PauliString single(std::size_t num_qubits, std::size_t qubit, Pauli p);

  std::size_t num_qubits() const { return letters_.size(); }
  int sign() const { return sign_; }
  Pauli operator[](std::size_t qubit) const { return letters_[qubit]; }
  std::span<const Pauli> letters() const { return letters_; }

  /// Sign followed by letters, e.g. "+XZI".
  std::string str() const;
  /// Letters only, without the sign.
  std::string letters_str() const;

  bool is_identity() const;
  std::size_t weight() const;
  std::vector<std::size_t> support() const;

  /// Commute iff the number of positions where both letters are
  /// non-identity and differ is even.
  bool commutes(const PauliString& other) const;
  /// Every position has equal letters or an identity on one side.
  bool qubitwise_commutes(const PauliString& other) const;

  // Bit q is set when the letter on qubit q flips (X, Y) or phases (Z, Y).
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  std::size_t y_count() const;

  bool operator==(const PauliString& other) const = default;

 private:
  std::vector<Pauli> letters_;
  int sign_ = +1;
};

/// Result of multiplying two Pauli strings: phase * string, where the
/// string itself always carries sign +1 and all signs fold into the phase.
struct PauliProduct {
  Complex phase;
  PauliString string;
};

PauliProduct multiply(const PauliString& lhs, const PauliString& rhs);

struct WeightedPauli {
  double weight = 0.0;
  PauliString term;
};

/// Real linear combination of Pauli strings with sum |weight| <= 1, which
/// is sufficient for an operator norm of at most one.
class Observable {
 public:
  Observable() = default;
  explicit Observable(std::vector<WeightedPauli> terms);

  static Observable single(PauliString term, double weight = 1.0);

  std::span<const WeightedPauli> terms() const { return terms_; }
  std::size_t num_qubits() const;
  double weight_sum() const;

  /// Pairwise qubit-wise commuting terms, measurable in one shared basis.
  bool qubitwise_commuting() const;
  /// O^2 = 1, i.e. a single Pauli string with unit weight.
  bool is_involutory() const;

 private:
  std::vector<WeightedPauli> terms_;
};

/// The terms h_j of H = sum_j h_j. All terms pairwise commute and square to
/// identity, so exp(-i theta H / 2) factorizes into per-term rotations.
class EncodingHamiltonian {
 public:
  EncodingHamiltonian() = default;
  explicit EncodingHamiltonian(std::vector<PauliString> terms);

  std::span<const PauliString> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  std::size_t num_qubits() const;

 private:
  std::vector<PauliString> terms_;
};

}  // namespace infersense
