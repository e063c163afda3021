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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "infersense/state.h"

namespace infersense {

enum class GateKind { H, X, CNOT, RX, RY, RZ, RXX };

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);
std::size_t gate_arity(GateKind kind);
std::size_t gate_param_count(GateKind kind);

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<std::size_t> targets;
  std::vector<double> params;

  bool operator==(const Gate&) const = default;
};

/// Independent single-qubit depolarizing on each listed qubit.
struct Depolarize {
  double probability = 0.0;
  std::vector<std::size_t> targets;

  bool operator==(const Depolarize&) const = default;
};

/// rho -> (1-p) rho + p I/d on the whole register.
struct GlobalDepolarize {
  double probability = 0.0;

  bool operator==(const GlobalDepolarize&) const = default;
};

using ChannelElement = std::variant<Gate, Depolarize, GlobalDepolarize>;

/// Ordered list of gates and noise steps. An empty channel is the identity.
class Channel {
 public:
  Channel() = default;
  explicit Channel(std::vector<ChannelElement> elements) : elements_(std::move(elements)) {}

  Channel& add(ChannelElement element);
  Channel& gate(GateKind kind, std::vector<std::size_t> targets, std::vector<double> params = {});

  const std::vector<ChannelElement>& elements() const { return elements_; }
  bool empty() const { return elements_.empty(); }
  /// Contains an explicit noise step with nonzero probability.
  bool has_noise() const;
  /// Angle parameters of all gates, in order.
  std::vector<double> gate_parameters() const;

  /// Throws std::invalid_argument on bad targets, arities or probabilities.
  void validate(std::size_t num_qubits) const;

  /// Applies every element; after each gate, when gate_noise > 0,
  /// depolarizes the gate's target qubits with that probability.
  void apply(QuantumState& state, double gate_noise = 0.0) const;

  bool operator==(const Channel&) const = default;

 private:
  std::vector<ChannelElement> elements_;
};

void apply_gate(QuantumState& state, const Gate& gate);

}  // namespace infersense
