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
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "infersense/inference.h"
#include "infersense/setup.h"
#include "infersense/trig_poly.h"
#include "json.hpp"

namespace infersense {

/// Convolutional measurement circuit that halves the retained qubits per
/// stage. Stage pairs are (q, q + step) over the retained qubits; the
/// second qubit of each pair is kept. Every block is
///   RZ RY on both qubits, CNOT(first -> second), RZ RY on both qubits,
/// eight angles in total. For n = 4 the blocks are (0,1), (2,3), (1,3) and
/// the readout is Z on qubit 3.
class TrainableMeasurement {
 public:
  static constexpr std::size_t kParamsPerBlock = 8;

  /// Requires n to be a power of two, n >= 2.
  explicit TrainableMeasurement(std::size_t num_qubits);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& blocks() const { return blocks_; }
  std::size_t parameter_count() const { return blocks_.size() * kParamsPerBlock; }
  std::size_t readout_qubit() const { return num_qubits_ - 1; }
  /// Z on the readout qubit; squares to the identity.
  Observable readout() const;

  Channel circuit(std::span<const double> params) const;

  /// `base` with the measurement channel and observable replaced.
  SensingSetup apply(const SensingSetup& base, std::span<const double> params) const;

 private:
  std::size_t num_qubits_;
  std::vector<std::pair<std::size_t, std::size_t>> blocks_;
};

/// (n / 2 pi) * integral over (-pi/n, pi/n) of (R(theta)/n - theta)^2, in
/// closed form.
double mse_loss(const TrigPoly& response, std::size_t n);

/// Infers R from exact expectations at 2L+1 nodes, then evaluates mse_loss.
double mse_loss(const SensingSetup& base, const TrainableMeasurement& m,
                std::span<const double> params);

/// Integral of theta * p(theta) over [lo, hi].
double integral_theta_times(const TrigPoly& p, double lo, double hi);

struct NelderMeadOptions {
  std::size_t max_iterations = 500;
  double initial_step = 0.5;
  /// Stagnation when the simplex value spread falls below this.
  double tolerance = 1e-12;
  std::size_t max_restarts = 3;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  /// Best value after each iteration.
  std::vector<double> history;
  std::size_t iterations = 0;
  std::size_t restarts = 0;
};

/// Adaptive-parameter Nelder-Mead. Restarts from the best vertex with a
/// fresh simplex when the simplex stagnates.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options);

struct TrainingOptions {
  std::size_t epochs = 500;
  std::uint64_t seed = 7;
  NelderMeadOptions optimizer;
  std::size_t curve_points = 201;
};

struct TrainingTrace {
  /// losses[0] is the initial loss, then one entry per epoch.
  std::vector<double> losses;
  std::vector<double> initial_params;
  std::vector<double> final_params;
  std::size_t restarts = 0;
  std::vector<SensitivityPoint> pre_curve;
  std::vector<SensitivityPoint> post_curve;

  double initial_loss() const { return losses.front(); }
  double final_loss() const { return losses.back(); }
  double min_pre_sensitivity() const;
  double min_post_sensitivity() const;
};

/// Random initial angles in [0, 2 pi), then Nelder-Mead on mse_loss.
/// Throws std::runtime_error if the loss becomes non-finite.
TrainingTrace train_measurement(const SensingSetup& base, const TrainableMeasurement& m,
                                const TrainingOptions& options);

/// Exact sensitivity over the interior of (-pi/n, pi/n).
std::vector<SensitivityPoint> measurement_sensitivity_curve(const SensingSetup& setup,
                                                            std::size_t points);

nlohmann::json to_json(const TrainingTrace& trace);

}  // namespace infersense
