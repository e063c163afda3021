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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "oracle.h"

namespace infersense {
namespace {

// Number of CNOT layers a gate list needs when gates on disjoint qubits
// share a layer.
std::size_t cnot_depth(const Channel& c, std::size_t n) {
  std::vector<std::size_t> ready(n, 0);
  std::size_t depth = 0;
  for (const auto& e : c.elements()) {
    const auto* g = std::get_if<Gate>(&e);
    if (!g || g->kind != GateKind::CNOT) continue;
    std::size_t layer = std::max(ready[g->targets[0]], ready[g->targets[1]]) + 1;
    ready[g->targets[0]] = ready[g->targets[1]] = layer;
    depth = std::max(depth, layer);
  }
  return depth;
}

TEST(Setup, GhzStructure) {
  auto s = build_ghz_setup(5);
  EXPECT_EQ(s.kind, SetupKind::ghz);
  EXPECT_EQ(s.term_count(), 5u);
  EXPECT_FALSE(s.is_noisy());
  EXPECT_TRUE(s.measurement.empty());
  EXPECT_EQ(s.observable.terms()[0].term.letters_str(), "XXXXX");
  EXPECT_EQ(cnot_depth(s.preparation, 5), 3u);
  EXPECT_EQ(cnot_depth(build_ghz_setup(8).preparation, 8), 3u);
  EXPECT_THROW(build_ghz_setup(0), std::invalid_argument);

  // The tree prepares (|0..0> + |1..1>)/sqrt(2).
  oracle::Mat rho = oracle::final_state(s, 0.0);
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-14);
  EXPECT_NEAR(rho(31, 31).real(), 0.5, 1e-14);
  EXPECT_NEAR(rho(0, 31).real(), 0.5, 1e-14);
}

TEST(Setup, SqueezingStructure) {
  auto s = build_squeezing_setup(4);
  EXPECT_EQ(s.term_count(), 6u);
  EXPECT_TRUE(s.preparation.empty());
  EXPECT_EQ(s.observable.terms()[0].term.letters_str(), "IIIZ");
  for (const auto& t : s.encoding.terms()) EXPECT_EQ(t.weight(), 2u);
  EXPECT_THROW(build_squeezing_setup(1), std::invalid_argument);
}

TEST(Setup, RandomAnsatzStructure) {
  auto a = build_random_ansatz_setup(3, 4, 99);
  auto b = build_random_ansatz_setup(3, 4, 99);
  auto c = build_random_ansatz_setup(3, 4, 100);
  EXPECT_EQ(a.preparation.gate_parameters(), b.preparation.gate_parameters());
  EXPECT_NE(a.preparation.gate_parameters(), c.preparation.gate_parameters());
  EXPECT_EQ(a.preparation.gate_parameters().size(), 4u * (2 * 3 + 2));
  for (double t : a.preparation.gate_parameters()) {
    EXPECT_GE(t, 0.0);
    EXPECT_LT(t, 2 * std::numbers::pi);
  }
  EXPECT_NEAR(a.observable.weight_sum(), 1.0, 1e-15);
  EXPECT_EQ(a.term_count(), 2u);
  EXPECT_THROW(build_random_ansatz_setup(1, 4, 1), std::invalid_argument);
}

TEST(Setup, BuildByKind) {
  EXPECT_EQ(build_setup(SetupKind::ghz, 3, {}, 0), build_ghz_setup(3));
  EXPECT_EQ(build_setup(SetupKind::random_ansatz, 3, {}, 5, 2), build_random_ansatz_setup(3, 2, 5));
  EXPECT_THROW(build_setup(SetupKind::custom, 3, {}, 0), std::invalid_argument);
  EXPECT_EQ(setup_kind_from_name("random-ansatz"), SetupKind::random_ansatz);
  EXPECT_THROW(setup_kind_from_name("bogus"), std::invalid_argument);
  EXPECT_THROW(NoisePreset::depolarizing(1.5), std::invalid_argument);
}

TEST(Setup, JsonRoundTrip) {
  for (const auto& s : {build_ghz_setup(3, NoisePreset::depolarizing(0.01)),
                        build_squeezing_setup(3), build_random_ansatz_setup(4, 2, 3)}) {
    auto doc = setup_to_json(s);
    auto back = setup_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_EQ(back, s);
    EXPECT_EQ(back.noise, s.noise);
    EXPECT_EQ(back.preparation, s.preparation);
  }
}

TEST(Setup, JsonCustomDocument) {
  auto doc = nlohmann::json::parse(R"({
    "n": 2,
    "preparation": [{"gate": "H", "targets": [0]}, {"depolarize": 0.01, "targets": [0]}],
    "hamiltonian": ["ZI", "IZ"],
    "observable": [{"weight": 0.5, "term": "XI"}, {"weight": 0.5, "term": "IX"}]
  })");
  auto s = setup_from_json(doc);
  EXPECT_EQ(s.kind, SetupKind::custom);
  EXPECT_TRUE(s.is_noisy());
  EXPECT_TRUE(s.preparation.has_noise());
}

TEST(Setup, JsonRejectsMalformedDocuments) {
  auto base = setup_to_json(build_ghz_setup(2));
  auto bad = base;
  bad["hamiltonian"] = {"ZII"};
  EXPECT_THROW(setup_from_json(bad), std::invalid_argument);
  bad = base;
  bad["preparation"] = {{{"gate", "TOFFOLI"}, {"targets", {0}}}};
  EXPECT_THROW(setup_from_json(bad), std::invalid_argument);
  bad = base;
  bad["preparation"] = {{{"gate", "CNOT"}, {"targets", {0, 5}}}};
  EXPECT_THROW(setup_from_json(bad), std::invalid_argument);
  bad = base;
  bad.erase("n");
  EXPECT_THROW(setup_from_json(bad), std::invalid_argument);
  bad = base;
  bad["noise"] = {{"kind", "amplitude"}};
  EXPECT_THROW(setup_from_json(bad), std::invalid_argument);
  bad = base;
  bad["observable"] = {{{"weight", 0.8}, {"term", "XX"}}, {{"weight", 0.8}, {"term", "ZZ"}}};
  EXPECT_THROW(setup_from_json(bad), std::invalid_argument);
}

}  // namespace
}  // namespace infersense
