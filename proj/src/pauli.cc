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

#include "infersense/pauli.h"

#include <cmath>
#include <stdexcept>

namespace infersense {

namespace {

constexpr double kWeightTolerance = 1e-12;

// Phase exponent k (as in i^k) of the single-qubit product a*b.
int product_phase(Pauli a, Pauli b) {
  if (a == Pauli::I || b == Pauli::I || a == b) {
    return 0;
  }
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
  auto ia = static_cast<int>(a);
  auto ib = static_cast<int>(b);
  return ((ib - ia + 3) % 3 == 1) ? 1 : 3;
}

Pauli product_letter(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<int>(a) ^ static_cast<int>(b));
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I:
      return 'I';
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
  }
  return '?';
}

PauliString::PauliString(std::vector<Pauli> letters, int sign)
    : letters_(std::move(letters)), sign_(sign) {
  if (sign_ != 1 && sign_ != -1) {
    throw std::invalid_argument("PauliString sign must be +1 or -1");
  }
}

PauliString PauliString::from_str(std::string_view text) {
  int sign = +1;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    sign = text.front() == '-' ? -1 : +1;
    text.remove_prefix(1);
  }
  std::vector<Pauli> letters;
  letters.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case 'I':
      case '_':
        letters.push_back(Pauli::I);
        break;
      case 'X':
        letters.push_back(Pauli::X);
        break;
      case 'Y':
        letters.push_back(Pauli::Y);
        break;
      case 'Z':
        letters.push_back(Pauli::Z);
        break;
      default:
        throw std::invalid_argument("bad Pauli letter '" + std::string(1, ch) +
                                    "' in \"" + std::string(text) + "\"");
    }
  }
  if (letters.empty()) {
    throw std::invalid_argument("empty Pauli string");
  }
  return PauliString(std::move(letters), sign);
}

PauliString PauliString::identity(std::size_t num_qubits) {
  return PauliString(std::vector<Pauli>(num_qubits, Pauli::I));
}

PauliString PauliString::single(std::size_t num_qubits, std::size_t qubit, Pauli p) {
  if (qubit >= num_qubits) {
    throw std::out_of_range("qubit index out of range");
  }
  std::vector<Pauli> letters(num_qubits, Pauli::I);
  letters[qubit] = p;
  return PauliString(std::move(letters));
}

std::string PauliString::str() const {
  return (sign_ < 0 ? "-" : "+") + letters_str();
}

std::string PauliString::letters_str() const {
  std::string out;
  out.reserve(letters_.size());
  for (Pauli p : letters_) {
    out.push_back(pauli_char(p));
  }
  return out;
}

bool PauliString::is_identity() const {
  for (Pauli p : letters_) {
    if (p != Pauli::I) {
      return false;
    }
  }
  return true;
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  for (Pauli p : letters_) {
    w += p != Pauli::I;
  }
  return w;
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    if (letters_[q] != Pauli::I) {
      out.push_back(q);
    }
  }
  return out;
}

bool PauliString::commutes(const PauliString& other) const {
  if (other.num_qubits() != num_qubits()) {
    throw std::invalid_argument("Pauli strings act on different qubit counts");
  }
  std::size_t anticommuting = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    Pauli a = letters_[q];
    Pauli b = other.letters_[q];
    anticommuting += a != Pauli::I && b != Pauli::I && a != b;
  }
  return anticommuting % 2 == 0;
}

bool PauliString::qubitwise_commutes(const PauliString& other) const {
  if (other.num_qubits() != num_qubits()) {
    throw std::invalid_argument("Pauli strings act on different qubit counts");
  }
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    Pauli a = letters_[q];
    Pauli b = other.letters_[q];
    if (a != Pauli::I && b != Pauli::I && a != b) {
      return false;
    }
  }
  return true;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    if (letters_[q] == Pauli::X || letters_[q] == Pauli::Y) {
      mask |= std::uint64_t{1} << q;
    }
  }
  return mask;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t mask = 0;
  for (std::size_t q = 0; q < letters_.size(); ++q) {
    if (letters_[q] == Pauli::Z || letters_[q] == Pauli::Y) {
      mask |= std::uint64_t{1} << q;
    }
  }
  return mask;
}

std::size_t PauliString::y_count() const {
  std::size_t count = 0;
  for (Pauli p : letters_) {
    count += p == Pauli::Y;
  }
  return count;
}

PauliProduct multiply(const PauliString& lhs, const PauliString& rhs) {
  if (lhs.num_qubits() != rhs.num_qubits()) {
    throw std::invalid_argument("Pauli strings act on different qubit counts");
  }
  int log_i = 0;
  std::vector<Pauli> letters(lhs.num_qubits());
  for (std::size_t q = 0; q < letters.size(); ++q) {
    log_i += product_phase(lhs[q], rhs[q]);
    letters[q] = product_letter(lhs[q], rhs[q]);
  }
  static constexpr Complex kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex phase = kPowersOfI[log_i % 4] * static_cast<double>(lhs.sign() * rhs.sign());
  return {phase, PauliString(std::move(letters))};
}

Observable::Observable(std::vector<WeightedPauli> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw std::invalid_argument("observable needs at least one term");
  }
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!std::isfinite(t.weight)) {
      throw std::invalid_argument("observable weight is not finite");
    }
    if (t.term.num_qubits() != terms_.front().term.num_qubits()) {
      throw std::invalid_argument("observable terms act on different qubit counts");
    }
    total += std::abs(t.weight);
  }
  if (total > 1.0 + kWeightTolerance) {
    throw std::invalid_argument("observable weight sum exceeds 1 (operator norm bound)");
  }
}

Observable Observable::single(PauliString term, double weight) {
  return Observable({WeightedPauli{weight, std::move(term)}});
}

std::size_t Observable::num_qubits() const {
  return terms_.empty() ? 0 : terms_.front().term.num_qubits();
}

double Observable::weight_sum() const {
  double total = 0.0;
  for (const auto& t : terms_) {
    total += std::abs(t.weight);
  }
  return total;
}

bool Observable::qubitwise_commuting() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (!terms_[i].term.qubitwise_commutes(terms_[j].term)) {
        return false;
      }
    }
  }
  return true;
}

bool Observable::is_involutory() const {
  return terms_.size() == 1 && std::abs(std::abs(terms_[0].weight) - 1.0) <= kWeightTolerance;
}

EncodingHamiltonian::EncodingHamiltonian(std::vector<PauliString> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) {
    throw std::invalid_argument("encoding Hamiltonian needs at least one term");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].num_qubits() != terms_.front().num_qubits()) {
      throw std::invalid_argument("encoding terms act on different qubit counts");
    }
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (!terms_[i].commutes(terms_[j])) {
        throw std::invalid_argument("encoding terms " + terms_[i].str() + " and " +
                                    terms_[j].str() + " do not commute");
      }
    }
  }
}

std::size_t EncodingHamiltonian::num_qubits() const {
  return terms_.empty() ? 0 : terms_.front().num_qubits();
}

}  // namespace infersense
