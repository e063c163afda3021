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
#include <string>
#include <string_view>

#include "infersense/channel.h"
#include "infersense/pauli.h"
#include "json.hpp"

namespace infersense {

enum class SetupKind { ghz, squeezing, random_ansatz, custom };

std::string_view setup_kind_name(SetupKind kind);
/// Accepts "ghz", "squeezing", "random", "random-ansatz" and "custom".
SetupKind setup_kind_from_name(std::string_view name);

/// Depolarizing probability applied after every gate of the preparation
/// and pre-measurement channels and after every encoding-term rotation,
/// on the qubits that gate touches. Zero means noiseless.
struct NoisePreset {
  double gate_depolarizing = 0.0;

  static NoisePreset none() { return {}; }
  static NoisePreset depolarizing(double rate);
  bool is_noiseless() const { return gate_depolarizing == 0.0; }

  bool operator==(const NoisePreset&) const = default;
};

/// Everything that defines R(theta) = Tr[D(S_theta(E(|0><0|))) O].
struct SensingSetup {
  SetupKind kind = SetupKind::custom;
  std::size_t num_qubits = 0;
  Channel preparation;
  EncodingHamiltonian encoding;
  Channel measurement;
  Observable observable;
  NoisePreset noise;

  /// Number of encoding terms L; R is a trigonometric polynomial of degree
  /// at most L.
  std::size_t term_count() const { return encoding.size(); }
  /// Simulation needs a density matrix.
  bool is_noisy() const;

  void validate() const;

  bool operator==(const SensingSetup&) const;
};

/// GHZ probe (log-depth CNOT tree), H = sum_j Z_j, parity O = X...X.
SensingSetup build_ghz_setup(std::size_t n, NoisePreset noise = {});

/// |0...0> probe, one-axis twisting H = sum_{j<k} X_j X_k, O = Z on the
/// last qubit.
SensingSetup build_squeezing_setup(std::size_t n, NoisePreset noise = {});

/// Hardware-efficient preparation: each layer applies RY then RZ to every
/// qubit, followed by RXX on each nearest-neighbour pair; all angles are
/// uniform in [0, 2 pi). H = sum_j Z_j Z_{j+1}, O = (1/n) sum_i X_i.
SensingSetup build_random_ansatz_setup(std::size_t n, std::size_t layers, std::uint64_t seed,
                                       NoisePreset noise = {});

/// Builds a setup by kind name with the default four ansatz layers.
SensingSetup build_setup(SetupKind kind, std::size_t n, NoisePreset noise, std::uint64_t seed,
                         std::size_t layers = 4);

nlohmann::json setup_to_json(const SensingSetup& setup);
SensingSetup setup_from_json(const nlohmann::json& doc);

}  // namespace infersense
