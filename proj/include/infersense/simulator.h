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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "infersense/setup.h"
#include "infersense/state.h"

namespace infersense {

struct SimulatorLimits {
  std::size_t max_pure_qubits = 14;
  std::size_t max_mixed_qubits = 10;
};

class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnsupportedMeasurementError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Empirical mean of N single-shot eigenvalues of O.
struct ShotEstimate {
  double mean = 0.0;
  std::uint64_t shots = 0;
  /// sqrt(empirical variance / N).
  double std_error = 0.0;
};

/// Dense simulator for one setup. The prepared state E(rho_in) is computed
/// once at construction; each query only applies encoding and D.
///
/// Immutable after construction and safe to share between threads.
class ResponseSimulator {
 public:
  explicit ResponseSimulator(SensingSetup setup, SimulatorLimits limits = {});

  const SensingSetup& setup() const { return setup_; }
  bool uses_density_matrix() const { return mixed_; }

  /// D(S_theta(E(rho_in))).
  QuantumState state_at(double theta) const;
  /// Same, with an individual angle per encoding term.
  QuantumState state_at(std::span<const double> term_angles) const;

  double response(double theta) const;
  /// dR/dtheta by the two-term parameter-shift rule on every encoding term.
  double slope(double theta) const;
  /// Tr[rho O^2] - Tr[rho O]^2.
  double variance(double theta) const;

  /// Samples `shots` bitstrings in the joint eigenbasis of O's terms.
  /// Throws UnsupportedMeasurementError when the terms are not qubit-wise
  /// commuting.
  ShotEstimate sample(double theta, std::uint64_t shots, std::uint64_t seed) const;

 private:
  SensingSetup setup_;
  bool mixed_ = false;
  QuantumState prepared_;
};

double exact_response(const SensingSetup& setup, double theta, SimulatorLimits limits = {});

ShotEstimate sample_response(const SensingSetup& setup, double theta, std::uint64_t shots,
                             std::uint64_t seed, SimulatorLimits limits = {});

}  // namespace infersense
