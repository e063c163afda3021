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

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "oracle.h"

namespace infersense {
namespace {

PauliString random_string(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> letter(0, 3);
  std::vector<Pauli> letters(n);
  for (auto& p : letters) p = static_cast<Pauli>(letter(rng));
  return PauliString(letters, rng() % 2 ? -1 : +1);
}

TEST(PauliString, ParsesAndPrints) {
  auto p = PauliString::from_str("-XZI");
  EXPECT_EQ(p.num_qubits(), 3u);
  EXPECT_EQ(p.sign(), -1);
  EXPECT_EQ(p[0], Pauli::X);
  EXPECT_EQ(p[1], Pauli::Z);
  EXPECT_EQ(p[2], Pauli::I);
  EXPECT_EQ(p.str(), "-XZI");
  EXPECT_EQ(p.letters_str(), "XZI");
  EXPECT_EQ(p.weight(), 2u);
  EXPECT_EQ(p.support(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(PauliString::from_str(p.str()), p);
}

TEST(PauliString, RejectsBadInput) {
  EXPECT_THROW(PauliString::from_str("XQ"), std::invalid_argument);
  EXPECT_THROW(PauliString::from_str(""), std::invalid_argument);
  EXPECT_THROW(PauliString({Pauli::X}, 2), std::invalid_argument);
}

TEST(PauliString, SquaresToPositiveIdentity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = random_string(rng, 5);
    auto sq = multiply(p, p);
    EXPECT_EQ(sq.phase, Complex(1, 0));
    EXPECT_TRUE(sq.string.is_identity());
    EXPECT_EQ(sq.string.sign(), +1);
  }
}

TEST(PauliString, ProductMatchesDenseMatrices) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_string(rng, 3);
    auto b = random_string(rng, 3);
    auto prod = multiply(a, b);
    oracle::Mat expected = oracle::pauli_string_matrix(a) * oracle::pauli_string_matrix(b);
    oracle::Mat got = prod.phase * oracle::pauli_string_matrix(prod.string);
    EXPECT_LT((expected - got).cwiseAbs().maxCoeff(), 1e-14) << a.str() << " * " << b.str();
  }
}

TEST(PauliString, CommutationMatchesDenseCommutator) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_string(rng, 3);
    auto b = random_string(rng, 3);
    oracle::Mat ma = oracle::pauli_string_matrix(a);
    oracle::Mat mb = oracle::pauli_string_matrix(b);
    bool dense = (ma * mb - mb * ma).cwiseAbs().maxCoeff() < 1e-14;
    EXPECT_EQ(a.commutes(b), dense) << a.str() << " " << b.str();
    EXPECT_EQ(a.commutes(b), b.commutes(a));
  }
}

TEST(PauliString, CommutationExamples) {
  EXPECT_TRUE(PauliString::from_str("XX").commutes(PauliString::from_str("ZZ")));
  EXPECT_FALSE(PauliString::from_str("XI").commutes(PauliString::from_str("ZI")));
  EXPECT_TRUE(PauliString::from_str("XI").commutes(PauliString::from_str("IZ")));
  EXPECT_FALSE(PauliString::from_str("XX").qubitwise_commutes(PauliString::from_str("ZZ")));
  EXPECT_TRUE(PauliString::from_str("XI").qubitwise_commutes(PauliString::from_str("XZ")));
}

TEST(Observable, EnforcesNormBound) {
  auto x = PauliString::from_str("XI");
  auto z = PauliString::from_str("IZ");
  EXPECT_NO_THROW(Observable({{0.5, x}, {-0.5, z}}));
  EXPECT_THROW(Observable({{0.7, x}, {-0.5, z}}), std::invalid_argument);
  EXPECT_THROW(Observable(std::vector<WeightedPauli>{}), std::invalid_argument);
  Observable o({{0.25, x}, {-0.5, z}});
  EXPECT_DOUBLE_EQ(o.weight_sum(), 0.75);
  EXPECT_TRUE(o.qubitwise_commuting());
  EXPECT_FALSE(o.is_involutory());
  EXPECT_TRUE(Observable::single(x).is_involutory());
}

TEST(Observable, DetectsNonQubitwiseCommutingTerms) {
  Observable o({{0.5, PauliString::from_str("XX")}, {0.5, PauliString::from_str("ZZ")}});
  EXPECT_FALSE(o.qubitwise_commuting());
}

TEST(EncodingHamiltonian, RequiresCommutingTerms) {
  EXPECT_NO_THROW(EncodingHamiltonian({PauliString::from_str("XXI"), PauliString::from_str("IXX"),
                                       PauliString::from_str("XIX")}));
  EXPECT_THROW(EncodingHamiltonian({PauliString::from_str("XI"), PauliString::from_str("ZI")}),
               std::invalid_argument);
  EXPECT_THROW(EncodingHamiltonian({PauliString::from_str("XI"), PauliString::from_str("XII")}),
               std::invalid_argument);
}

}  // namespace
}  // namespace infersense
