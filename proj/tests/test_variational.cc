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

#include "infersense/variational.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "infersense/simulator.h"

namespace infersense {
namespace {

constexpr double kPi = std::numbers::pi;

// (n / 2 pi) * trapezoid over 10^4 intervals of (R/n - theta)^2 on (-pi/n, pi/n).
double quadrature_loss(const std::function<double(double)>& r, std::size_t n) {
  const double nd = static_cast<double>(n), w = kPi / nd;
  const int steps = 10000;
  const double h = 2 * w / steps;
  auto f = [&](double t) {
    double d = r(t) / nd - t;
    return d * d;
  };
  double sum = 0.5 * (f(-w) + f(w));
  for (int i = 1; i < steps; ++i) sum += f(-w + i * h);
  return nd / (2 * kPi) * sum * h;
}

// Composite Simpson on the same integrand, for wide windows where the
// trapezoid error exceeds 1e-8.
double simpson_loss(const std::function<double(double)>& r, std::size_t n) {
  const double nd = static_cast<double>(n), w = kPi / nd;
  const int steps = 10000;
  const double h = 2 * w / steps;
  auto f = [&](double t) {
    double d = r(t) / nd - t;
    return d * d;
  };
  double sum = f(-w) + f(w);
  for (int i = 1; i < steps; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(-w + i * h);
  return nd / (2 * kPi) * sum * h / 3;
}

std::vector<double> random_params(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  std::vector<double> p(count);
  for (auto& x : p) x = u(rng);
  return p;
}

TEST(TrainableMeasurement, Template) {
  TrainableMeasurement m(4);
  using B = std::pair<std::size_t, std::size_t>;
  EXPECT_EQ(m.blocks(), (std::vector<B>{{0, 1}, {2, 3}, {1, 3}}));
  EXPECT_EQ(m.parameter_count(), 24u);
  EXPECT_EQ(m.readout_qubit(), 3u);
  EXPECT_TRUE(m.readout().is_involutory());
  EXPECT_EQ(m.readout().terms()[0].term.letters_str(), "IIIZ");
  EXPECT_EQ(TrainableMeasurement(8).blocks().size(), 7u);
  EXPECT_EQ(TrainableMeasurement(2).parameter_count(), 8u);
  EXPECT_THROW(TrainableMeasurement(3), std::invalid_argument);
  EXPECT_THROW(TrainableMeasurement(1), std::invalid_argument);
}

TEST(TrainableMeasurement, CircuitLayout) {
  TrainableMeasurement m(4);
  auto params = random_params(24, 1);
  auto c = m.circuit(params);
  EXPECT_EQ(c.gate_parameters(), params);
  std::size_t cnots = 0;
  for (const auto& e : c.elements()) {
    if (std::get<Gate>(e).kind == GateKind::CNOT) ++cnots;
  }
  EXPECT_EQ(cnots, 3u);
  EXPECT_THROW(m.circuit(std::vector<double>(23, 0.0)), std::invalid_argument);
}

TEST(TrainableMeasurement, ApplyReplacesMeasurement) {
  TrainableMeasurement m(4);
  auto base = build_ghz_setup(4);
  auto s = m.apply(base, random_params(24, 2));
  EXPECT_EQ(s.kind, SetupKind::custom);
  EXPECT_EQ(s.preparation, base.preparation);
  EXPECT_EQ(s.measurement.elements().size(), 3u * 9u);
  EXPECT_TRUE(s.observable.is_involutory());
  EXPECT_THROW(m.apply(build_ghz_setup(2), random_params(24, 2)), std::invalid_argument);
}

TEST(Loss, ZeroResponseClosedForm) {
  for (std::size_t n : {2, 4, 8}) {
    double nd = static_cast<double>(n);
    double want = nd / (2 * kPi) * (2.0 / 3.0) * std::pow(kPi / nd, 3);
    EXPECT_NEAR(mse_loss(TrigPoly::constant(0.0), n), want, 1e-15);
  }
  EXPECT_THROW(mse_loss(TrigPoly::constant(0.0), 0), std::invalid_argument);
}

TEST(Loss, MatchesQuadratureForRandomPolynomials) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t n : {2, 4}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> a(4), b(4);
      for (auto& x : a) x = u(rng);
      for (auto& x : b) x = u(rng);
      TrigPoly p(a, b, u(rng));
      EXPECT_NEAR(mse_loss(p, n), simpson_loss([&](double t) { return p(t); }, n), 1e-10);
    }
  }
}

TEST(Loss, MatchesQuadratureForRandomCircuits) {
  TrainableMeasurement m(4);
  auto base = build_ghz_setup(4);
  for (std::uint64_t seed : {3, 4, 5}) {
    auto params = random_params(24, seed);
    ResponseSimulator sim(m.apply(base, params));
    double analytic = mse_loss(base, m, params);
    EXPECT_TRUE(std::isfinite(analytic));
    EXPECT_NEAR(analytic, quadrature_loss([&](double t) { return sim.response(t); }, 4), 1e-8);
  }
}

TEST(Loss, InvariantUnderOddReflection) {
  // R(theta) -> -R(-theta) maps the integrand onto itself mirrored.
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(3), b(3);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  TrigPoly p(a, b, u(rng));
  std::vector<double> ra(3), rb(3);
  for (std::size_t s = 0; s < 3; ++s) {
    ra[s] = -a[s];
    rb[s] = b[s];
  }
  TrigPoly reflected(ra, rb, -p.c());
  for (double t : {-0.4, 0.1, 0.7}) EXPECT_NEAR(reflected(t), -p(-t), 1e-14);
  EXPECT_NEAR(mse_loss(p, 4), mse_loss(reflected, 4), 1e-12);
  EXPECT_NEAR(mse_loss(reflected, 4), quadrature_loss([&](double t) { return -p(-t); }, 4), 1e-8);
}

TEST(Loss, ThetaMomentMatchesQuadrature) {
  TrigPoly p({0.3, -0.2}, {0.5, 0.1}, 0.25);
  const double lo = -0.9, hi = 1.3;
  const int steps = 20000;
  double h = (hi - lo) / steps, sum = 0.5 * (lo * p(lo) + hi * p(hi));
  for (int i = 1; i < steps; ++i) sum += (lo + i * h) * p(lo + i * h);
  EXPECT_NEAR(integral_theta_times(p, lo, hi), sum * h, 1e-8);
  EXPECT_THROW(integral_theta_times(p, 1.0, 0.0), std::invalid_argument);
}

TEST(NelderMead, MinimizesQuadratic) {
  auto f = [](std::span<const double> x) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.5 * i) * (x[i] - 0.5 * i);
    return s;
  };
  NelderMeadOptions opts;
  opts.max_iterations = 3000;
  auto r = nelder_mead(f, {2.0, -1.0, 3.0}, opts);
  EXPECT_LT(r.value, 1e-10);
  EXPECT_NEAR(r.x[1], 0.5, 1e-4);
  EXPECT_NEAR(r.x[2], 1.0, 1e-4);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
  EXPECT_LE(r.restarts, opts.max_restarts);
  EXPECT_THROW(nelder_mead(f, {}, opts), std::invalid_argument);
}

TEST(NelderMead, RestartsOnStagnation) {
  auto f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  NelderMeadOptions opts;
  opts.max_iterations = 100000;
  opts.tolerance = 1e-6;
  auto r = nelder_mead(f, {1.0, 1.0}, opts);
  EXPECT_EQ(r.restarts, opts.max_restarts);
  EXPECT_LT(r.iterations, opts.max_iterations);
  EXPECT_EQ(r.history.size(), r.iterations);
}

TEST(Training, DeterministicAndMonotone) {
  TrainableMeasurement m(4);
  auto base = build_ghz_setup(4);
  TrainingOptions opts;
  opts.epochs = 60;
  opts.curve_points = 21;
  auto a = train_measurement(base, m, opts);
  auto b = train_measurement(base, m, opts);
  EXPECT_EQ(a.losses, b.losses);
  EXPECT_EQ(a.final_params, b.final_params);
  ASSERT_EQ(a.losses.size(), 61u);
  for (std::size_t i = 1; i < a.losses.size(); ++i) {
    EXPECT_TRUE(std::isfinite(a.losses[i]));
    EXPECT_LE(a.losses[i], a.losses[i - 1]);
  }
  EXPECT_LE(a.final_loss(), a.initial_loss());
  EXPECT_NEAR(a.final_loss(), mse_loss(base, m, a.final_params), 1e-12);
  EXPECT_EQ(a.pre_curve.size(), 21u);
  EXPECT_EQ(a.post_curve.size(), 21u);
  opts.seed = 8;
  EXPECT_NE(train_measurement(base, m, opts).initial_params, a.initial_params);
  opts.epochs = 0;
  EXPECT_THROW(train_measurement(base, m, opts), std::invalid_argument);
}

TEST(Training, TraceSerializes) {
  TrainableMeasurement m(2);
  TrainingOptions opts;
  opts.epochs = 5;
  opts.curve_points = 5;
  auto doc = to_json(train_measurement(build_ghz_setup(2), m, opts));
  EXPECT_EQ(doc.at("losses").size(), 6u);
  EXPECT_EQ(doc.at("final_params").size(), 8u);
  EXPECT_EQ(doc.at("post_curve").size(), 5u);
}

TEST(Training, SensitivityCurveExcludesWindowEdges) {
  auto curve = measurement_sensitivity_curve(build_ghz_setup(4), 9);
  ASSERT_EQ(curve.size(), 9u);
  EXPECT_GT(curve.front().theta, -kPi / 4);
  EXPECT_LT(curve.back().theta, kPi / 4);
  EXPECT_TRUE(curve[4].divergent);  // theta = 0
}

}  // namespace
}  // namespace infersense
