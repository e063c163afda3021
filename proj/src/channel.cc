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

#include "infersense/channel.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace infersense {

namespace {

struct GateInfo {
  GateKind kind;
  std::string_view name;
  std::size_t arity;
  std::size_t params;
};

constexpr GateInfo kGateTable[] = {
    {GateKind::H, "H", 1, 0},     {GateKind::X, "X", 1, 0},   {GateKind::CNOT, "CNOT", 2, 0},
    {GateKind::RX, "RX", 1, 1},   {GateKind::RY, "RY", 1, 1}, {GateKind::RZ, "RZ", 1, 1},
    {GateKind::RXX, "RXX", 2, 1},
};

const GateInfo& info(GateKind kind) {
  for (const auto& g : kGateTable) {
    if (g.kind == kind) {
      return g;
    }
  }
  throw std::logic_error("unknown gate kind");
}

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::string_view gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_from_name(std::string_view name) {
  for (const auto& g : kGateTable) {
    if (g.name == name) {
      return g.kind;
    }
  }
  if (name == "CX") {
    return GateKind::CNOT;
  }
  return std::nullopt;
}

std::size_t gate_arity(GateKind kind) { return info(kind).arity; }
std::size_t gate_param_count(GateKind kind) { return info(kind).params; }

Channel& Channel::add(ChannelElement element) {
  elements_.push_back(std::move(element));
  return *this;
}

Channel& Channel::gate(GateKind kind, std::vector<std::size_t> targets, std::vector<double> params) {
  return add(Gate{kind, std::move(targets), std::move(params)});
}

bool Channel::has_noise() const {
  for (const auto& e : elements_) {
    if (const auto* d = std::get_if<Depolarize>(&e); d && d->probability > 0) {
      return true;
    }
    if (const auto* g = std::get_if<GlobalDepolarize>(&e); g && g->probability > 0) {
      return true;
    }
  }
  return false;
}

std::vector<double> Channel::gate_parameters() const {
  std::vector<double> out;
  for (const auto& e : elements_) {
    if (const auto* g = std::get_if<Gate>(&e)) {
      out.insert(out.end(), g->params.begin(), g->params.end());
    }
  }
  return out;
}

void Channel::validate(std::size_t num_qubits) const {
  auto check_targets = [num_qubits](const std::vector<std::size_t>& targets) {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] >= num_qubits) {
        throw std::invalid_argument("channel target " + std::to_string(targets[i]) +
                                    " out of range for " + std::to_string(num_qubits) +
                                    " qubits");
      }
      for (std::size_t j = i + 1; j < targets.size(); ++j) {
        if (targets[i] == targets[j]) {
          throw std::invalid_argument("repeated channel target");
        }
      }
    }
  };
  for (const auto& e : elements_) {
    if (const auto* g = std::get_if<Gate>(&e)) {
      if (g->targets.size() != gate_arity(g->kind)) {
        throw std::invalid_argument(std::string(gate_name(g->kind)) + " expects " +
                                    std::to_string(gate_arity(g->kind)) + " targets");
      }
      if (g->params.size() != gate_param_count(g->kind)) {
        throw std::invalid_argument(std::string(gate_name(g->kind)) + " expects " +
                                    std::to_string(gate_param_count(g->kind)) + " parameters");
      }
      for (double p : g->params) {
        if (!std::isfinite(p)) {
          throw std::invalid_argument("gate parameter is not finite");
        }
      }
      check_targets(g->targets);
    } else if (const auto* d = std::get_if<Depolarize>(&e)) {
      if (!valid_probability(d->probability)) {
        throw std::invalid_argument("depolarizing probability must be in [0, 1]");
      }
      check_targets(d->targets);
    } else if (const auto* gd = std::get_if<GlobalDepolarize>(&e)) {
      if (!valid_probability(gd->probability)) {
        throw std::invalid_argument("depolarizing probability must be in [0, 1]");
      }
    }
  }
}

void apply_gate(QuantumState& state, const Gate& gate) {
  const auto& t = gate.targets;
  const std::size_t n = state.num_qubits();
  switch (gate.kind) {
    case GateKind::H:
      state.apply_matrix(gates::hadamard(), t.at(0));
      break;
    case GateKind::X:
      state.apply_matrix(gates::pauli_x(), t.at(0));
      break;
    case GateKind::CNOT:
      state.apply_cnot(t.at(0), t.at(1));
      break;
    case GateKind::RX:
      state.apply_matrix(gates::rx(gate.params.at(0)), t.at(0));
      break;
    case GateKind::RY:
      state.apply_matrix(gates::ry(gate.params.at(0)), t.at(0));
      break;
    case GateKind::RZ:
      state.apply_matrix(gates::rz(gate.params.at(0)), t.at(0));
      break;
    case GateKind::RXX: {
      std::vector<Pauli> letters(n, Pauli::I);
      letters.at(t.at(0)) = Pauli::X;
      letters.at(t.at(1)) = Pauli::X;
      state.apply_pauli_rotation(PauliString(std::move(letters)), gate.params.at(0));
      break;
    }
  }
}

void Channel::apply(QuantumState& state, double gate_noise) const {
  for (const auto& e : elements_) {
    if (const auto* g = std::get_if<Gate>(&e)) {
      apply_gate(state, *g);
      if (gate_noise > 0.0) {
        for (auto q : g->targets) {
          state.apply_depolarizing(q, gate_noise);
        }
      }
    } else if (const auto* d = std::get_if<Depolarize>(&e)) {
      if (d->probability > 0.0) {
        for (auto q : d->targets) {
          state.apply_depolarizing(q, d->probability);
        }
      }
    } else if (const auto* gd = std::get_if<GlobalDepolarize>(&e)) {
      if (gd->probability > 0.0) {
        state.apply_global_depolarizing(gd->probability);
      }
    }
  }
}

}  // namespace infersense
