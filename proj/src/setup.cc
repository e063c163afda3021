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

#include "infersense/setup.h"

#include <numbers>
#include <stdexcept>

#include "infersense/random.h"

namespace infersense {

using nlohmann::json;

std::string_view setup_kind_name(SetupKind kind) {
  switch (kind) {
    case SetupKind::ghz:
      return "ghz";
    case SetupKind::squeezing:
      return "squeezing";
    case SetupKind::random_ansatz:
      return "random";
    case SetupKind::custom:
      return "custom";
  }
  return "custom";
}

SetupKind setup_kind_from_name(std::string_view name) {
  if (name == "ghz") return SetupKind::ghz;
  if (name == "squeezing") return SetupKind::squeezing;
  if (name == "random" || name == "random-ansatz") return SetupKind::random_ansatz;
  if (name == "custom") return SetupKind::custom;
  throw std::invalid_argument("unknown setup kind '" + std::string(name) + "'");
}

NoisePreset NoisePreset::depolarizing(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("depolarizing rate must be in [0, 1]");
  }
  return NoisePreset{rate};
}

bool SensingSetup::is_noisy() const {
  return !noise.is_noiseless() || preparation.has_noise() || measurement.has_noise();
}

void SensingSetup::validate() const {
  if (num_qubits == 0) {
    throw std::invalid_argument("setup needs at least one qubit");
  }
  if (encoding.size() == 0 || encoding.num_qubits() != num_qubits) {
    throw std::invalid_argument("encoding Hamiltonian does not match the qubit count");
  }
  if (observable.terms().empty() || observable.num_qubits() != num_qubits) {
    throw std::invalid_argument("observable does not match the qubit count");
  }
  if (!(noise.gate_depolarizing >= 0.0 && noise.gate_depolarizing <= 1.0)) {
    throw std::invalid_argument("noise rate must be in [0, 1]");
  }
  preparation.validate(num_qubits);
  measurement.validate(num_qubits);
}

bool SensingSetup::operator==(const SensingSetup& other) const {
  return setup_to_json(*this) == setup_to_json(other);
}

SensingSetup build_ghz_setup(std::size_t n, NoisePreset noise) {
  if (n == 0) {
    throw std::invalid_argument("GHZ setup needs n >= 1");
  }
  SensingSetup s;
  s.kind = SetupKind::ghz;
  s.num_qubits = n;
  s.noise = noise;
  s.preparation.gate(GateKind::H, {0});
  // Doubling tree: after each round the first `active` qubits hold a GHZ state.
  for (std::size_t active = 1; active < n; active *= 2) {
    for (std::size_t i = 0; i < active && i + active < n; ++i) {
      s.preparation.gate(GateKind::CNOT, {i, i + active});
    }
  }
  std::vector<PauliString> terms;
  for (std::size_t j = 0; j < n; ++j) {
    terms.push_back(PauliString::single(n, j, Pauli::Z));
  }
  s.encoding = EncodingHamiltonian(std::move(terms));
  s.observable = Observable::single(PauliString(std::vector<Pauli>(n, Pauli::X)));
  s.validate();
  return s;
}

SensingSetup build_squeezing_setup(std::size_t n, NoisePreset noise) {
  if (n < 2) {
    throw std::invalid_argument("squeezing setup needs n >= 2");
  }
  SensingSetup s;
  s.kind = SetupKind::squeezing;
  s.num_qubits = n;
  s.noise = noise;
  std::vector<PauliString> terms;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      std::vector<Pauli> letters(n, Pauli::I);
      letters[j] = Pauli::X;
      letters[k] = Pauli::X;
      terms.emplace_back(std::move(letters));
    }
  }
  s.encoding = EncodingHamiltonian(std::move(terms));
  s.observable = Observable::single(PauliString::single(n, n - 1, Pauli::Z));
  s.validate();
  return s;
}

SensingSetup build_random_ansatz_setup(std::size_t n, std::size_t layers, std::uint64_t seed,
                                       NoisePreset noise) {
  if (n < 2) {
    throw std::invalid_argument("random ansatz setup needs n >= 2");
  }
  SensingSetup s;
  s.kind = SetupKind::random_ansatz;
  s.num_qubits = n;
  s.noise = noise;
  Rng rng(seed);
  auto angle = [&rng] { return uniform(rng, 0.0, 2.0 * std::numbers::pi); };
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (std::size_t q = 0; q < n; ++q) {
      s.preparation.gate(GateKind::RY, {q}, {angle()});
      s.preparation.gate(GateKind::RZ, {q}, {angle()});
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
      s.preparation.gate(GateKind::RXX, {j, j + 1}, {angle()});
    }
  }
  std::vector<PauliString> terms;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    std::vector<Pauli> letters(n, Pauli::I);
    letters[j] = Pauli::Z;
    letters[j + 1] = Pauli::Z;
    terms.emplace_back(std::move(letters));
  }
  s.encoding = EncodingHamiltonian(std::move(terms));
  std::vector<WeightedPauli> obs;
  for (std::size_t i = 0; i < n; ++i) {
    obs.push_back({1.0 / static_cast<double>(n), PauliString::single(n, i, Pauli::X)});
  }
  s.observable = Observable(std::move(obs));
  s.validate();
  return s;
}

SensingSetup build_setup(SetupKind kind, std::size_t n, NoisePreset noise, std::uint64_t seed,
                         std::size_t layers) {
  switch (kind) {
    case SetupKind::ghz:
      return build_ghz_setup(n, noise);
    case SetupKind::squeezing:
      return build_squeezing_setup(n, noise);
    case SetupKind::random_ansatz:
      return build_random_ansatz_setup(n, layers, seed, noise);
    case SetupKind::custom:
      break;
  }
  throw std::invalid_argument("custom setups are loaded from JSON, not built by kind");
}

namespace {

json channel_to_json(const Channel& channel) {
  json out = json::array();
  for (const auto& e : channel.elements()) {
    if (const auto* g = std::get_if<Gate>(&e)) {
      json item{{"gate", gate_name(g->kind)}, {"targets", g->targets}};
      if (!g->params.empty()) {
        item["params"] = g->params;
      }
      out.push_back(std::move(item));
    } else if (const auto* d = std::get_if<Depolarize>(&e)) {
      out.push_back({{"depolarize", d->probability}, {"targets", d->targets}});
    } else if (const auto* gd = std::get_if<GlobalDepolarize>(&e)) {
      out.push_back({{"global_depolarize", gd->probability}});
    }
  }
  return out;
}

Channel channel_from_json(const json& doc) {
  if (!doc.is_array()) {
    throw std::invalid_argument("channel must be a JSON array");
  }
  Channel channel;
  for (const auto& item : doc) {
    if (item.contains("gate")) {
      auto name = item.at("gate").get<std::string>();
      auto kind = gate_from_name(name);
      if (!kind) {
        throw std::invalid_argument("unknown gate '" + name + "'");
      }
      channel.gate(*kind, item.at("targets").get<std::vector<std::size_t>>(),
                   item.value("params", std::vector<double>{}));
    } else if (item.contains("depolarize")) {
      channel.add(Depolarize{item.at("depolarize").get<double>(),
                             item.at("targets").get<std::vector<std::size_t>>()});
    } else if (item.contains("global_depolarize")) {
      channel.add(GlobalDepolarize{item.at("global_depolarize").get<double>()});
    } else {
      throw std::invalid_argument("unrecognized channel element " + item.dump());
    }
  }
  return channel;
}

}  // namespace

json setup_to_json(const SensingSetup& setup) {
  json terms = json::array();
  for (const auto& t : setup.encoding.terms()) {
    terms.push_back(t.str());
  }
  json obs = json::array();
  for (const auto& t : setup.observable.terms()) {
    obs.push_back({{"weight", t.weight}, {"term", t.term.str()}});
  }
  json noise =
      setup.noise.is_noiseless()
          ? json{{"kind", "none"}}
          : json{{"kind", "depolarizing"}, {"rate", setup.noise.gate_depolarizing}};
  return json{{"kind", setup_kind_name(setup.kind)},
              {"n", setup.num_qubits},
              {"preparation", channel_to_json(setup.preparation)},
              {"hamiltonian", std::move(terms)},
              {"measurement", channel_to_json(setup.measurement)},
              {"observable", std::move(obs)},
              {"noise", std::move(noise)}};
}

SensingSetup setup_from_json(const json& doc) {
  try {
    SensingSetup s;
    s.kind = setup_kind_from_name(doc.value("kind", std::string("custom")));
    s.num_qubits = doc.at("n").get<std::size_t>();
    s.preparation = channel_from_json(doc.value("preparation", json::array()));
    s.measurement = channel_from_json(doc.value("measurement", json::array()));
    std::vector<PauliString> terms;
    for (const auto& t : doc.at("hamiltonian")) {
      terms.push_back(PauliString::from_str(t.get<std::string>()));
    }
    s.encoding = EncodingHamiltonian(std::move(terms));
    std::vector<WeightedPauli> obs;
    for (const auto& t : doc.at("observable")) {
      obs.push_back({t.at("weight").get<double>(),
                     PauliString::from_str(t.at("term").get<std::string>())});
    }
    s.observable = Observable(std::move(obs));
    if (doc.contains("noise")) {
      const auto& noise = doc.at("noise");
      auto kind = noise.value("kind", std::string("none"));
      if (kind == "depolarizing") {
        s.noise = NoisePreset::depolarizing(noise.at("rate").get<double>());
      } else if (kind != "none") {
        throw std::invalid_argument("unknown noise preset '" + kind + "'");
      }
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed setup document: ") + e.what());
  }
}

}  // namespace infersense
