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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "infersense/channel.h"
#include "oracle.h"

namespace infersense {
namespace {

oracle::Mat dense(const QuantumState& s) {
  const auto d = static_cast<Eigen::Index>(s.dimension());
  oracle::Mat m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = s.rho(r, c);
  }
  return m;
}

double max_diff(const oracle::Mat& a, const oracle::Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

oracle::Mat matrix2(const Matrix2& u) {
  oracle::Mat m(2, 2);
  m << u[0], u[1], u[2], u[3];
  return m;
}

Channel random_circuit(std::mt19937_64& rng, std::size_t n, std::size_t gates) {
  std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
  std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
  std::uniform_int_distribution<int> kind(0, 6);
  Channel c;
  for (std::size_t g = 0; g < gates; ++g) {
    auto k = static_cast<GateKind>(kind(rng));
    std::size_t a = qubit(rng);
    std::size_t b = (a + 1 + qubit(rng) % (n - 1)) % n;
    if (gate_arity(k) == 1) {
      c.gate(k, {a}, gate_param_count(k) ? std::vector<double>{angle(rng)} : std::vector<double>{});
    } else {
      c.gate(k, {a, b}, gate_param_count(k) ? std::vector<double>{angle(rng)} : std::vector<double>{});
    }
  }
  return c;
}

TEST(Gates, MatricesMatchDefinitions) {
  const double t = 0.731;
  auto x = oracle::pauli_matrix(Pauli::X);
  auto y = oracle::pauli_matrix(Pauli::Y);
  auto z = oracle::pauli_matrix(Pauli::Z);
  EXPECT_LT(max_diff(matrix2(gates::rx(t)), oracle::rotation(x, t)), 1e-15);
  EXPECT_LT(max_diff(matrix2(gates::ry(t)), oracle::rotation(y, t)), 1e-15);
  EXPECT_LT(max_diff(matrix2(gates::rz(t)), oracle::rotation(z, t)), 1e-15);
  EXPECT_LT(max_diff(matrix2(gates::pauli_x()), x), 1e-15);
  oracle::Mat h(2, 2);
  h << 1, 1, 1, -1;
  EXPECT_LT(max_diff(matrix2(gates::hadamard()), h / std::sqrt(2.0)), 1e-15);
  auto prod = gates::multiply(gates::rx(0.3), gates::rz(1.1));
  EXPECT_LT(max_diff(matrix2(prod), matrix2(gates::rx(0.3)) * matrix2(gates::rz(1.1))), 1e-15);
}

TEST(QuantumState, ZeroStateBasics) {
  auto pure = QuantumState::zero(3);
  EXPECT_TRUE(pure.is_pure());
  EXPECT_EQ(pure.dimension(), 8u);
  EXPECT_EQ(pure.amplitude(0), Complex(1, 0));
  EXPECT_DOUBLE_EQ(pure.trace(), 1.0);
  auto mixed = QuantumState::zero(3, QuantumState::Kind::mixed);
  EXPECT_EQ(mixed.rho(0, 0), Complex(1, 0));
  EXPECT_DOUBLE_EQ(mixed.expectation(PauliString::from_str("ZZZ")), 1.0);
  EXPECT_DOUBLE_EQ(mixed.expectation(PauliString::from_str("-ZII")), -1.0);
  EXPECT_THROW(QuantumState::zero(0), std::invalid_argument);
}

TEST(QuantumState, ValidatesConstructionInputs) {
  EXPECT_THROW(QuantumState::from_amplitudes({1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(QuantumState::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
  const double h = 1 / std::sqrt(2.0);
  auto plus = QuantumState::from_amplitudes({h, h});
  EXPECT_NEAR(plus.expectation(PauliString::from_str("X")), 1.0, 1e-15);

  std::vector<Complex> not_hermitian{0.5, Complex(0, 0.1), Complex(0, 0.1), 0.5};
  EXPECT_THROW(QuantumState::from_density_matrix(1, not_hermitian), std::invalid_argument);
  std::vector<Complex> bad_trace{0.7, 0, 0, 0.7};
  EXPECT_THROW(QuantumState::from_density_matrix(1, bad_trace), std::invalid_argument);
  std::vector<Complex> negative{1.2, 0, 0, -0.2};
  EXPECT_THROW(QuantumState::from_density_matrix(1, negative), std::invalid_argument);
  std::vector<Complex> ok{0.75, 0.25, 0.25, 0.25};
  auto s = QuantumState::from_density_matrix(1, ok);
  EXPECT_NEAR(s.expectation(PauliString::from_str("X")), 0.5, 1e-15);
  EXPECT_NEAR(s.min_eigenvalue(), 0.5 - std::sqrt(0.125), 1e-12);
}

TEST(QuantumState, PureAndMixedAgreeWithDenseOracle) {
  std::mt19937_64 rng(21);
  const std::size_t n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    Channel c = random_circuit(rng, n, 12);
    auto pure = QuantumState::zero(n);
    auto mixed = QuantumState::zero(n, QuantumState::Kind::mixed);
    c.apply(pure);
    c.apply(mixed);
    oracle::Mat rho0 = oracle::Mat::Zero(8, 8);
    rho0(0, 0) = 1;
    oracle::Mat expected = oracle::apply_channel(rho0, n, c, 0.0);
    EXPECT_LT(max_diff(dense(pure), expected), 1e-12);
    EXPECT_LT(max_diff(dense(mixed), expected), 1e-12);
    auto obs = PauliString::from_str("XYZ");
    double want = (expected * oracle::pauli_string_matrix(obs)).trace().real();
    EXPECT_NEAR(pure.expectation(obs), want, 1e-12);
    EXPECT_NEAR(mixed.expectation(obs), want, 1e-12);
  }
}

TEST(QuantumState, NoisyChannelMatchesKrausOracleAndStaysPhysical) {
  std::mt19937_64 rng(22);
  const std::size_t n = 3;
  for (double p : {0.01, 0.05, 0.3}) {
    Channel c = random_circuit(rng, n, 10);
    c.add(Depolarize{0.1, {1}});
    c.add(GlobalDepolarize{0.05});
    auto mixed = QuantumState::zero(n, QuantumState::Kind::mixed);
    c.apply(mixed, p);
    oracle::Mat rho0 = oracle::Mat::Zero(8, 8);
    rho0(0, 0) = 1;
    EXPECT_LT(max_diff(dense(mixed), oracle::apply_channel(rho0, n, c, p)), 1e-12);
    EXPECT_NEAR(mixed.trace(), 1.0, 1e-10);
    EXPECT_LT(mixed.hermiticity_error(), 1e-10);
    EXPECT_GT(mixed.min_eigenvalue(), -1e-10);
  }
}

TEST(QuantumState, DepolarizingNeedsMixedState) {
  auto pure = QuantumState::zero(2);
  EXPECT_THROW(pure.apply_depolarizing(0, 0.1), std::logic_error);
  auto mixed = QuantumState::zero(2, QuantumState::Kind::mixed);
  EXPECT_THROW(mixed.apply_depolarizing(0, 1.5), std::invalid_argument);
  EXPECT_THROW(mixed.apply_depolarizing(5, 0.1), std::out_of_range);
  mixed.apply_depolarizing(0, 1.0);
  // Full depolarization: Z on qubit 0 drops to 1 - 4/3.
  EXPECT_NEAR(mixed.expectation(PauliString::from_str("ZI")), -1.0 / 3.0, 1e-15);
}

TEST(QuantumState, RotationThenInverseIsIdentity) {
  std::mt19937_64 rng(23);
  const std::size_t n = 4;
  Channel prep = random_circuit(rng, n, 15);
  for (auto kind : {QuantumState::Kind::pure, QuantumState::Kind::mixed}) {
    auto s = QuantumState::zero(n, kind);
    prep.apply(s);
    oracle::Mat before = dense(s);
    std::vector<PauliString> terms{PauliString::from_str("XXII"), PauliString::from_str("IXXI"),
                                   PauliString::from_str("-XIXX")};
    for (const auto& h : terms) s.apply_pauli_rotation(h, 0.813);
    for (const auto& h : terms) s.apply_pauli_rotation(h, -0.813);
    EXPECT_LT(max_diff(dense(s), before), 1e-10);
  }
}

TEST(QuantumState, PauliRotationMatchesMatrixExponential) {
  std::mt19937_64 rng(24);
  const std::size_t n = 3;
  Channel prep = random_circuit(rng, n, 10);
  auto s = QuantumState::zero(n);
  prep.apply(s);
  oracle::Mat before = dense(s);
  auto h = PauliString::from_str("-YXZ");
  s.apply_pauli_rotation(h, 1.234);
  oracle::Mat u = oracle::rotation(oracle::pauli_string_matrix(h), 1.234);
  EXPECT_LT(max_diff(dense(s), u * before * u.adjoint()), 1e-12);
}

TEST(QuantumState, ProbabilitiesAndSquareExpectation) {
  std::mt19937_64 rng(25);
  auto s = QuantumState::zero(2, QuantumState::Kind::mixed);
  random_circuit(rng, 2, 8).apply(s, 0.02);
  auto probs = s.probabilities();
  double total = 0;
  for (std::size_t b = 0; b < probs.size(); ++b) {
    EXPECT_NEAR(probs[b], s.rho(b, b).real(), 1e-15);
    total += probs[b];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  Observable o({{0.5, PauliString::from_str("XI")}, {0.25, PauliString::from_str("IZ")}});
  oracle::Mat om = oracle::observable_matrix(o);
  EXPECT_NEAR(s.expectation_of_square(o), (dense(s) * om * om).trace().real(), 1e-12);
}

}  // namespace
}  // namespace infersense
