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

#include "infersense/simulator.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "infersense/random.h"

namespace infersense {

namespace {

QuantumState prepare(const SensingSetup& setup, bool mixed, const SimulatorLimits& limits) {
  setup.validate();
  const std::size_t n = setup.num_qubits;
  if (n > limits.max_pure_qubits) {
    throw DimensionError("setup has " + std::to_string(n) + " qubits; simulator cap is " +
                         std::to_string(limits.max_pure_qubits));
  }
  if (mixed && n > limits.max_mixed_qubits) {
    throw DimensionError("noisy setup has " + std::to_string(n) +
                         " qubits; density-matrix cap is " +
                         std::to_string(limits.max_mixed_qubits));
  }
  auto state = QuantumState::zero(n, mixed ? QuantumState::Kind::mixed : QuantumState::Kind::pure);
  setup.preparation.apply(state, setup.noise.gate_depolarizing);
  return state;
}

// Single-qubit basis change mapping the measured letter onto Z.
Matrix2 basis_change(Pauli p) {
  switch (p) {
    case Pauli::X:
      return gates::hadamard();
    case Pauli::Y:
      return gates::multiply(gates::hadamard(), gates::s_dagger());
    default:
      return {1.0, 0.0, 0.0, 1.0};
  }
}

}  // namespace

ResponseSimulator::ResponseSimulator(SensingSetup setup, SimulatorLimits limits)
    : setup_(std::move(setup)),
      mixed_(setup_.is_noisy()),
      prepared_(prepare(setup_, mixed_, limits)) {}

QuantumState ResponseSimulator::state_at(double theta) const {
  std::vector<double> angles(setup_.term_count(), theta);
  return state_at(angles);
}

QuantumState ResponseSimulator::state_at(std::span<const double> term_angles) const {
  if (term_angles.size() != setup_.term_count()) {
    throw std::invalid_argument("one angle per encoding term required");
  }
  QuantumState state = prepared_;
  const double noise = setup_.noise.gate_depolarizing;
  auto terms = setup_.encoding.terms();
  for (std::size_t j = 0; j < terms.size(); ++j) {
    state.apply_pauli_rotation(terms[j], term_angles[j]);
    if (noise > 0.0) {
      for (auto q : terms[j].support()) {
        state.apply_depolarizing(q, noise);
      }
    }
  }
  setup_.measurement.apply(state, noise);
  return state;
}

double ResponseSimulator::response(double theta) const {
  return state_at(theta).expectation(setup_.observable);
}

double ResponseSimulator::slope(double theta) const {
  const double shift = std::numbers::pi / 2;
  std::vector<double> angles(setup_.term_count(), theta);
  double total = 0.0;
  for (std::size_t j = 0; j < angles.size(); ++j) {
    angles[j] = theta + shift;
    double plus = state_at(angles).expectation(setup_.observable);
    angles[j] = theta - shift;
    double minus = state_at(angles).expectation(setup_.observable);
    angles[j] = theta;
    total += 0.5 * (plus - minus);
  }
  return total;
}

double ResponseSimulator::variance(double theta) const {
  QuantumState state = state_at(theta);
  double mean = state.expectation(setup_.observable);
  return state.expectation_of_square(setup_.observable) - mean * mean;
}

ShotEstimate ResponseSimulator::sample(double theta, std::uint64_t shots,
                                       std::uint64_t seed) const {
  if (shots == 0) {
    throw std::invalid_argument("shot count must be at least 1");
  }
  const Observable& obs = setup_.observable;
  if (!obs.qubitwise_commuting()) {
    throw UnsupportedMeasurementError(
        "observable terms are not qubit-wise commuting; no single measurement basis");
  }
  const std::size_t n = setup_.num_qubits;
  std::vector<Pauli> basis(n, Pauli::I);
  for (const auto& t : obs.terms()) {
    for (std::size_t q = 0; q < n; ++q) {
      if (t.term[q] != Pauli::I) {
        basis[q] = t.term[q];
      }
    }
  }
  QuantumState state = state_at(theta);
  for (std::size_t q = 0; q < n; ++q) {
    if (basis[q] == Pauli::X || basis[q] == Pauli::Y) {
      state.apply_matrix(basis_change(basis[q]), q);
    }
  }
  std::vector<double> probs = state.probabilities();
  const std::size_t dim = probs.size();

  // Eigenvalue of O on each rotated basis outcome.
  std::vector<double> eigen(dim, 0.0);
  for (const auto& t : obs.terms()) {
    std::uint64_t mask = 0;
    for (auto q : t.term.support()) {
      mask |= std::uint64_t{1} << q;
    }
    double coeff = t.weight * t.term.sign();
    for (std::size_t b = 0; b < dim; ++b) {
      eigen[b] += (std::popcount(b & mask) & 1) ? -coeff : coeff;
    }
  }

  // Multinomial draw as a chain of conditional binomials.
  Rng rng(seed);
  double remaining_mass = 0.0;
  for (double p : probs) {
    remaining_mass += p;
  }
  std::uint64_t remaining = shots;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t b = 0; b < dim && remaining > 0; ++b) {
    std::uint64_t count = 0;
    if (b + 1 == dim || probs[b] >= remaining_mass) {
      count = remaining;
    } else if (probs[b] > 0.0) {
      double ratio = std::clamp(probs[b] / remaining_mass, 0.0, 1.0);
      std::binomial_distribution<std::uint64_t> draw(remaining, ratio);
      count = draw(rng);
    }
    remaining_mass -= probs[b];
    remaining -= count;
    sum += static_cast<double>(count) * eigen[b];
    sum_sq += static_cast<double>(count) * eigen[b] * eigen[b];
  }
  const double total = static_cast<double>(shots);
  ShotEstimate out;
  out.shots = shots;
  out.mean = sum / total;
  double var = std::max(sum_sq / total - out.mean * out.mean, 0.0);
  out.std_error = std::sqrt(var / total);
  return out;
}

double exact_response(const SensingSetup& setup, double theta, SimulatorLimits limits) {
  return ResponseSimulator(setup, limits).response(theta);
}

ShotEstimate sample_response(const SensingSetup& setup, double theta, std::uint64_t shots,
                             std::uint64_t seed, SimulatorLimits limits) {
  return ResponseSimulator(setup, limits).sample(theta, shots, seed);
}

}  // namespace infersense
