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

#include "infersense/state.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace infersense {

namespace {

constexpr double kPureNormTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;

using Buffer = std::vector<Complex>;

inline double parity_sign(std::uint64_t bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

// sign * i^(number of Y letters): P = kappa * X^x Z^z.
Complex pauli_kappa(const PauliString& p) {
  static constexpr Complex kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowersOfI[p.y_count() % 4] * static_cast<double>(p.sign());
}

void apply_matrix_bits(Buffer& v, std::uint64_t bit, const Matrix2& u) {
  const std::size_t size = v.size();
  for (std::size_t i = 0; i < size; ++i) {
    if (i & bit) {
      continue;
    }
    Complex a = v[i];
    Complex b = v[i | bit];
    v[i] = u[0] * a + u[1] * b;
    v[i | bit] = u[2] * a + u[3] * b;
  }
}

void apply_cnot_bits(Buffer& v, std::uint64_t control, std::uint64_t target) {
  const std::size_t size = v.size();
  for (std::size_t i = 0; i < size; ++i) {
    if ((i & control) && !(i & target)) {
      std::swap(v[i], v[i | target]);
    }
  }
}

// v <- c v + m (X^x Z^z v).
void rotate_bits(Buffer& v, std::uint64_t x, std::uint64_t z, Complex c, Complex m) {
  const std::size_t size = v.size();
  if (x == 0) {
    for (std::size_t b = 0; b < size; ++b) {
      v[b] *= c + m * parity_sign(b & z);
    }
    return;
  }
  for (std::size_t b = 0; b < size; ++b) {
    std::size_t partner = b ^ x;
    if (partner < b) {
      continue;
    }
    Complex vb = v[b];
    Complex vp = v[partner];
    v[b] = c * vb + m * parity_sign(partner & z) * vp;
    v[partner] = c * vp + m * parity_sign(b & z) * vb;
  }
}

Matrix2 conj(const Matrix2& u) {
  return {std::conj(u[0]), std::conj(u[1]), std::conj(u[2]), std::conj(u[3])};
}

}  // namespace

QuantumState::QuantumState(std::size_t num_qubits, Kind kind, std::vector<Complex> data)
    : num_qubits_(num_qubits), kind_(kind), data_(std::move(data)) {}

QuantumState QuantumState::zero(std::size_t num_qubits, Kind kind) {
  if (num_qubits == 0 || num_qubits > 30) {
    throw std::invalid_argument("qubit count must be in [1, 30]");
  }
  std::size_t dim = std::size_t{1} << num_qubits;
  std::vector<Complex> data(kind == Kind::pure ? dim : dim * dim);
  data[0] = 1.0;
  return QuantumState(num_qubits, kind, std::move(data));
}

QuantumState QuantumState::from_amplitudes(std::vector<Complex> amplitudes) {
  std::size_t dim = amplitudes.size();
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("amplitude count must be a power of two >= 2");
  }
  double norm = 0.0;
  for (const auto& a : amplitudes) {
    norm += std::norm(a);
  }
  if (std::abs(norm - 1.0) > kPureNormTolerance) {
    throw std::invalid_argument("statevector is not normalized");
  }
  auto n = static_cast<std::size_t>(std::countr_zero(dim));
  return QuantumState(n, Kind::pure, std::move(amplitudes));
}

QuantumState QuantumState::from_density_matrix(std::size_t num_qubits,
                                               std::span<const Complex> row_major) {
  std::size_t dim = std::size_t{1} << num_qubits;
  if (num_qubits == 0 || row_major.size() != dim * dim) {
    throw std::invalid_argument("density matrix size does not match qubit count");
  }
  std::vector<Complex> data(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      data[r + (c << num_qubits)] = row_major[r * dim + c];
    }
  }
  QuantumState state(num_qubits, Kind::mixed, std::move(data));
  if (state.hermiticity_error() > kHermitianTolerance) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(state.trace() - 1.0) > kTraceTolerance) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  if (state.min_eigenvalue() < kEigenvalueFloor) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
  return state;
}

Complex QuantumState::amplitude(std::uint64_t basis) const {
  if (!is_pure()) {
    throw std::logic_error("amplitude() on a mixed state");
  }
  return data_.at(basis);
}

Complex QuantumState::rho(std::uint64_t row, std::uint64_t col) const {
  if (is_pure()) {
    return data_.at(row) * std::conj(data_.at(col));
  }
  return data_.at(row + (col << num_qubits_));
}

QuantumState QuantumState::to_mixed() const {
  if (!is_pure()) {
    return *this;
  }
  std::size_t dim = dimension();
  std::vector<Complex> data(dim * dim);
  for (std::size_t c = 0; c < dim; ++c) {
    Complex cc = std::conj(data_[c]);
    for (std::size_t r = 0; r < dim; ++r) {
      data[r + (c << num_qubits_)] = data_[r] * cc;
    }
  }
  return QuantumState(num_qubits_, Kind::mixed, std::move(data));
}

void QuantumState::check_qubit(std::size_t qubit) const {
  if (qubit >= num_qubits_) {
    throw std::out_of_range("qubit " + std::to_string(qubit) + " out of range for " +
                            std::to_string(num_qubits_) + " qubits");
  }
}

void QuantumState::require_mixed(const char* what) const {
  if (is_pure()) {
    throw std::logic_error(std::string(what) + " requires a mixed state");
  }
}

void QuantumState::apply_matrix(const Matrix2& u, std::size_t qubit) {
  check_qubit(qubit);
  apply_matrix_bits(data_, std::uint64_t{1} << qubit, u);
  if (!is_pure()) {
    apply_matrix_bits(data_, std::uint64_t{1} << (qubit + num_qubits_), conj(u));
  }
}

void QuantumState::apply_cnot(std::size_t control, std::size_t target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) {
    throw std::invalid_argument("CNOT control and target coincide");
  }
  apply_cnot_bits(data_, std::uint64_t{1} << control, std::uint64_t{1} << target);
  if (!is_pure()) {
    apply_cnot_bits(data_, std::uint64_t{1} << (control + num_qubits_),
                    std::uint64_t{1} << (target + num_qubits_));
  }
}

void QuantumState::apply_pauli_rotation(const PauliString& generator, double angle) {
  if (generator.num_qubits() != num_qubits_) {
    throw std::invalid_argument("rotation generator qubit count mismatch");
  }
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const Complex kappa = pauli_kappa(generator);
  const std::uint64_t x = generator.x_mask();
  const std::uint64_t z = generator.z_mask();
  rotate_bits(data_, x, z, c, Complex(0, -s) * kappa);
  if (!is_pure()) {
    rotate_bits(data_, x << num_qubits_, z << num_qubits_, c, Complex(0, s) * std::conj(kappa));
  }
}

void QuantumState::apply_depolarizing(std::size_t qubit, double probability) {
  require_mixed("depolarizing");
  check_qubit(qubit);
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw std::invalid_argument("depolarizing probability must be in [0, 1]");
  }
  if (probability == 0.0) {
    return;
  }
  const std::uint64_t row_bit = std::uint64_t{1} << qubit;
  const std::uint64_t col_bit = std::uint64_t{1} << (qubit + num_qubits_);
  const double keep = 1.0 - 2.0 * probability / 3.0;
  const double swap = 2.0 * probability / 3.0;
  const double off = 1.0 - 4.0 * probability / 3.0;
  const std::size_t size = data_.size();
  for (std::size_t i = 0; i < size; ++i) {
    if (i & (row_bit | col_bit)) {
      continue;
    }
    Complex& d0 = data_[i];
    Complex& d1 = data_[i | row_bit | col_bit];
    Complex a = d0;
    Complex b = d1;
    d0 = keep * a + swap * b;
    d1 = keep * b + swap * a;
    data_[i | row_bit] *= off;
    data_[i | col_bit] *= off;
  }
}

void QuantumState::apply_global_depolarizing(double probability) {
  require_mixed("global depolarizing");
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw std::invalid_argument("depolarizing probability must be in [0, 1]");
  }
  if (probability == 0.0) {
    return;
  }
  for (auto& v : data_) {
    v *= 1.0 - probability;
  }
  std::size_t dim = dimension();
  double fill = probability / static_cast<double>(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    data_[r + (r << num_qubits_)] += fill;
  }
}

double QuantumState::expectation(const PauliString& p) const {
  if (p.num_qubits() != num_qubits_) {
    throw std::invalid_argument("Pauli string qubit count mismatch");
  }
  const Complex kappa = pauli_kappa(p);
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const std::size_t dim = dimension();
  Complex total = 0.0;
  if (is_pure()) {
    for (std::size_t b = 0; b < dim; ++b) {
      std::size_t src = b ^ x;
      total += std::conj(data_[b]) * parity_sign(src & z) * data_[src];
    }
  } else {
    for (std::size_t r = 0; r < dim; ++r) {
      total += data_[r + ((r ^ x) << num_qubits_)] * parity_sign(r & z);
    }
  }
  return (kappa * total).real();
}

double QuantumState::expectation(const Observable& o) const {
  double total = 0.0;
  for (const auto& t : o.terms()) {
    total += t.weight * expectation(t.term);
  }
  return total;
}

double QuantumState::expectation_of_square(const Observable& o) const {
  double total = 0.0;
  auto terms = o.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = 0; j < terms.size(); ++j) {
      PauliProduct prod = multiply(terms[i].term, terms[j].term);
      total += terms[i].weight * terms[j].weight * prod.phase.real() * expectation(prod.string);
    }
  }
  return total;
}

std::vector<double> QuantumState::probabilities() const {
  const std::size_t dim = dimension();
  std::vector<double> probs(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    double p = is_pure() ? std::norm(data_[b]) : data_[b + (b << num_qubits_)].real();
    probs[b] = std::max(p, 0.0);
  }
  return probs;
}

double QuantumState::trace() const {
  if (is_pure()) {
    double norm = 0.0;
    for (const auto& a : data_) {
      norm += std::norm(a);
    }
    return norm;
  }
  double t = 0.0;
  for (std::size_t r = 0; r < dimension(); ++r) {
    t += data_[r + (r << num_qubits_)].real();
  }
  return t;
}

double QuantumState::hermiticity_error() const {
  if (is_pure()) {
    return 0.0;
  }
  double worst = 0.0;
  const std::size_t dim = dimension();
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = r; c < dim; ++c) {
      Complex a = data_[r + (c << num_qubits_)];
      Complex b = data_[c + (r << num_qubits_)];
      worst = std::max(worst, std::abs(a - std::conj(b)));
    }
  }
  return worst;
}

double QuantumState::min_eigenvalue() const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  if (is_pure()) {
    return dim == 1 ? 1.0 : 0.0;
  }
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = data_[static_cast<std::size_t>(r) + (static_cast<std::size_t>(c) << num_qubits_)];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

namespace gates {

Matrix2 hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h, h, -h};
}

Matrix2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }

Matrix2 rx(double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  return {c, Complex(0, -s), Complex(0, -s), c};
}

Matrix2 ry(double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  return {c, -s, s, c};
}

Matrix2 rz(double angle) {
  return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
}

Matrix2 s_dagger() { return {1.0, 0.0, 0.0, Complex(0, -1)}; }

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

}  // namespace gates

}  // namespace infersense
