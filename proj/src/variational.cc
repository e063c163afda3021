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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "infersense/random.h"
#include "infersense/simulator.h"

namespace infersense {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TrainableMeasurement::TrainableMeasurement(std::size_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 2 || !std::has_single_bit(num_qubits)) {
    throw std::invalid_argument("trainable measurement needs a power-of-two qubit count >= 2");
  }
  std::vector<std::size_t> kept(num_qubits);
  std::iota(kept.begin(), kept.end(), 0);
  while (kept.size() > 1) {
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i + 1 < kept.size(); i += 2) {
      blocks_.emplace_back(kept[i], kept[i + 1]);
      next.push_back(kept[i + 1]);
    }
    kept = std::move(next);
  }
}

Observable TrainableMeasurement::readout() const {
  return Observable::single(PauliString::single(num_qubits_, readout_qubit(), Pauli::Z));
}

Channel TrainableMeasurement::circuit(std::span<const double> params) const {
  if (params.size() != parameter_count()) {
    throw std::invalid_argument("expected " + std::to_string(parameter_count()) +
                                " measurement parameters, got " + std::to_string(params.size()));
  }
  Channel c;
  std::size_t p = 0;
  auto rotate = [&](std::size_t q) {
    c.gate(GateKind::RZ, {q}, {params[p++]});
    c.gate(GateKind::RY, {q}, {params[p++]});
  };
  for (auto [a, b] : blocks_) {
    rotate(a);
    rotate(b);
    c.gate(GateKind::CNOT, {a, b});
    rotate(a);
    rotate(b);
  }
  return c;
}

SensingSetup TrainableMeasurement::apply(const SensingSetup& base,
                                         std::span<const double> params) const {
  if (base.num_qubits != num_qubits_) {
    throw std::invalid_argument("setup and measurement template differ in qubit count");
  }
  SensingSetup s = base;
  s.kind = SetupKind::custom;
  s.measurement = circuit(params);
  s.observable = readout();
  return s;
}

double integral_theta_times(const TrigPoly& p, double lo, double hi) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("integral bounds must satisfy lo <= hi");
  }
  double total = p.c() * 0.5 * (hi * hi - lo * lo);
  for (std::size_t s = 1; s <= p.degree(); ++s) {
    double k = static_cast<double>(s);
    // Antiderivatives of theta cos(k theta) and theta sin(k theta).
    auto fc = [k](double t) { return t * std::sin(k * t) / k + std::cos(k * t) / (k * k); };
    auto fs = [k](double t) { return -t * std::cos(k * t) / k + std::sin(k * t) / (k * k); };
    total += p.a()[s - 1] * (fc(hi) - fc(lo)) + p.b()[s - 1] * (fs(hi) - fs(lo));
  }
  return total;
}

double mse_loss(const TrigPoly& response, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("mse_loss needs n >= 1");
  }
  const double nd = static_cast<double>(n);
  const double w = kPi / nd;
  TrigPoly scaled = response * (1.0 / nd);
  double sq = (scaled * scaled).integral(-w, w);
  double cross = integral_theta_times(scaled, -w, w);
  double lin = 2.0 * w * w * w / 3.0;
  return nd / (2.0 * kPi) * (sq - 2.0 * cross + lin);
}

double mse_loss(const SensingSetup& base, const TrainableMeasurement& m,
                std::span<const double> params) {
  ResponseSimulator sim(m.apply(base, params));
  auto inf = infer_response(sim, default_degree(sim.setup()), 0, 0);
  return mse_loss(inf.poly, base.num_qubits);
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) {
    throw std::invalid_argument("nelder_mead needs at least one parameter");
  }
  const double nd = static_cast<double>(dim);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / nd;
  const double contract = 0.75 - 1.0 / (2.0 * nd);
  const double shrink = 1.0 - 1.0 / nd;

  std::vector<std::vector<double>> pts;
  std::vector<double> vals;
  auto build = [&](const std::vector<double>& centre) {
    pts.assign(dim + 1, centre);
    vals.assign(dim + 1, 0.0);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += options.initial_step;
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = f(pts[i]);
  };
  build(x0);

  NelderMeadResult out;
  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto point_along = [&](double t, std::vector<double>& dst, const std::vector<double>& worst) {
    for (std::size_t i = 0; i < dim; ++i) dst[i] = centroid[i] + t * (centroid[i] - worst[i]);
  };

  while (out.iterations < options.max_iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += pts[order[k]][i] / nd;
    }
    point_along(reflect, trial, pts[worst]);
    double fr = f(trial);
    if (fr < vals[best]) {
      point_along(expand, trial2, pts[worst]);
      double fe = f(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        vals[worst] = fe;
      } else {
        pts[worst] = trial;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = trial;
      vals[worst] = fr;
    } else {
      bool outside = fr < vals[worst];
      point_along(outside ? contract : -contract, trial2, pts[worst]);
      double fc = f(trial2);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = trial2;
        vals[worst] = fc;
      } else {
        for (std::size_t k = 1; k <= dim; ++k) {
          auto& p = pts[order[k]];
          for (std::size_t i = 0; i < dim; ++i) p[i] = pts[best][i] + shrink * (p[i] - pts[best][i]);
          vals[order[k]] = f(p);
        }
      }
    }
    ++out.iterations;

    auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    out.history.push_back(*lo);
    if (*hi - *lo <= options.tolerance * (1.0 + std::abs(*lo))) {
      if (out.restarts >= options.max_restarts) break;
      ++out.restarts;
      std::vector<double> centre = pts[static_cast<std::size_t>(lo - vals.begin())];
      build(centre);
    }
  }
  std::size_t b = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  out.x = pts[b];
  out.value = vals[b];
  return out;
}

std::vector<SensitivityPoint> measurement_sensitivity_curve(const SensingSetup& setup,
                                                            std::size_t points) {
  ResponseSimulator sim(setup);
  const double w = kPi / static_cast<double>(setup.num_qubits);
  std::vector<SensitivityPoint> out;
  for (double t : sensitivity_grid(-w, w, points)) out.push_back(sensitivity_exact(sim, t));
  return out;
}

namespace {

double min_sensitivity(const std::vector<SensitivityPoint>& curve) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : curve) {
    if (!p.divergent) m = std::min(m, p.sensitivity);
  }
  return m;
}

}  // namespace

double TrainingTrace::min_pre_sensitivity() const { return min_sensitivity(pre_curve); }
double TrainingTrace::min_post_sensitivity() const { return min_sensitivity(post_curve); }

TrainingTrace train_measurement(const SensingSetup& base, const TrainableMeasurement& m,
                                const TrainingOptions& options) {
  if (options.epochs == 0) {
    throw std::invalid_argument("training needs at least one epoch");
  }
  TrainingTrace trace;
  Rng rng(options.seed);
  trace.initial_params.resize(m.parameter_count());
  for (auto& p : trace.initial_params) p = uniform(rng, 0.0, 2.0 * kPi);

  auto loss = [&](std::span<const double> x) {
    double v = mse_loss(base, m, x);
    if (!std::isfinite(v)) {
      std::string where;
      for (double p : x) where += format_double(p) + " ";
      throw std::runtime_error("non-finite loss at parameters [ " + where + "]");
    }
    return v;
  };

  trace.losses.push_back(loss(trace.initial_params));
  NelderMeadOptions nm = options.optimizer;
  nm.max_iterations = options.epochs;
  auto result = nelder_mead(loss, trace.initial_params, nm);
  trace.losses.insert(trace.losses.end(), result.history.begin(), result.history.end());
  trace.final_params = result.x;
  trace.restarts = result.restarts;
  trace.pre_curve = measurement_sensitivity_curve(m.apply(base, trace.initial_params),
                                                  options.curve_points);
  trace.post_curve =
      measurement_sensitivity_curve(m.apply(base, trace.final_params), options.curve_points);
  return trace;
}

json to_json(const TrainingTrace& trace) {
  auto curve = [](const std::vector<SensitivityPoint>& c) {
    json out = json::array();
    for (const auto& p : c) out.push_back(to_json(p));
    return out;
  };
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{{"losses", trace.losses},
              {"initial_loss", trace.initial_loss()},
              {"final_loss", trace.final_loss()},
              {"initial_params", trace.initial_params},
              {"final_params", trace.final_params},
              {"restarts", trace.restarts},
              {"min_pre_sensitivity", finite_or_null(trace.min_pre_sensitivity())},
              {"min_post_sensitivity", finite_or_null(trace.min_post_sensitivity())},
              {"pre_curve", curve(trace.pre_curve)},
              {"post_curve", curve(trace.post_curve)}};
}

}  // namespace infersense
