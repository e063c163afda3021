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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infersense/setup.h"
#include "infersense/simulator.h"
#include "infersense/trig_poly.h"
#include "json.hpp"

namespace infersense {

/// Shot count per node: N = ceil(50 ln^2 n ln((4n+2)/a) / delta^2).
std::uint64_t shot_budget(std::size_t n, double delta, double a);

/// N = ceil(500 ln^2 n ln(200 (2n+1))).
std::uint64_t paper_shot_schedule(std::size_t n);

/// 5 eps ln n.
double error_bound(double eps, std::size_t n);

/// "exact", a positive integer, "paper", or "budget:DELTA,A".
class ShotsPolicy {
 public:
  enum class Kind { exact, fixed, paper, budget };

  static ShotsPolicy exact() { return ShotsPolicy(Kind::exact); }
  static ShotsPolicy fixed(std::uint64_t shots);
  static ShotsPolicy paper() { return ShotsPolicy(Kind::paper); }
  static ShotsPolicy budget(double delta, double a);
  static ShotsPolicy parse(std::string_view text);

  Kind kind() const { return kind_; }
  double delta() const { return delta_; }
  double failure_probability() const { return a_; }
  std::string str() const;

  /// Shots per node for a degree-D inference; 0 means exact expectations.
  /// The `paper` and `budget` schedules are evaluated at max(D, 2).
  std::uint64_t shots_for(std::size_t degree) const;

  bool operator==(const ShotsPolicy&) const = default;

 private:
  explicit ShotsPolicy(Kind kind) : kind_(kind) {}
  Kind kind_ = Kind::exact;
  std::uint64_t shots_ = 0;
  double delta_ = 0.0;
  double a_ = 0.0;
};

struct InferenceResult {
  TrigPoly poly;
  SampleVector samples;
  /// 0 in exact-expectation mode.
  std::uint64_t shots_per_node = 0;
  /// 3 x the largest per-node standard error.
  double epsilon_estimate = 0.0;
  /// error_bound(epsilon_estimate, max(D, 2)).
  double bound_value = 0.0;

  std::size_t degree() const { return poly.degree(); }
};

/// Fits the closed-form interpolant to existing samples and fills the
/// epsilon estimate from their standard errors.
InferenceResult infer_from_samples(SampleVector samples);

/// Samples R at equidistant_nodes(degree), `shots` per node (0 for exact
/// expectations). Node k draws from derive_seed(seed, k).
InferenceResult infer_response(const ResponseSimulator& sim, std::size_t degree,
                               std::uint64_t shots, std::uint64_t seed);

InferenceResult infer_response(const SensingSetup& setup, std::size_t degree,
                               const ShotsPolicy& policy, std::uint64_t seed,
                               SimulatorLimits limits = {});

/// Degree used when none is requested: the encoding term count L.
inline std::size_t default_degree(const SensingSetup& setup) { return setup.term_count(); }

struct EstimationOutcome {
  double theta = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool bijective = false;
  double residual = 0.0;
};

/// argmin over [lo, hi] of |f(theta) - measured|: 1024-point grid, then
/// golden-section refinement to 1e-10. Bijectivity is judged from the sign
/// of `df` on 512 points.
EstimationOutcome estimate_parameter(const std::function<double(double)>& f,
                                     const std::function<double(double)>& df, double measured,
                                     double lo, double hi);

EstimationOutcome estimate_parameter(const TrigPoly& poly, double measured, double lo, double hi);

inline constexpr double kSlopeFloor = 1e-8;

struct SensitivityPoint {
  double theta = 0.0;
  double variance = 0.0;
  double slope = 0.0;
  /// (Delta theta)^2; +infinity when divergent.
  double sensitivity = 0.0;
  bool divergent = false;
};

/// Variance from the simulator state, slope by parameter shift.
SensitivityPoint sensitivity_exact(const ResponseSimulator& sim, double theta);

/// (1 - R~^2) / R~'^2, valid for observables with O^2 = 1. A negative
/// numerator (|R~| > 1 from noise) is clamped to zero.
SensitivityPoint sensitivity_inferred(const TrigPoly& poly, double theta);

/// Exact sensitivity on a fixed grid, reused across trials.
struct SensitivityCurve {
  std::vector<SensitivityPoint> points;
  /// Smallest |slope| over the grid.
  double min_slope = 0.0;
};

/// `points` interior points of (lo, hi).
std::vector<double> sensitivity_grid(double lo, double hi, std::size_t points);

SensitivityCurve exact_sensitivity_curve(const ResponseSimulator& sim,
                                         std::span<const double> thetas);

/// Window that avoids vanishing slopes: (pi/6n, 5pi/6n) for GHZ, centred on
/// the first zero of cos(n theta); (pi/3n, pi/n) otherwise.
std::pair<double, double> default_sensitivity_range(const SensingSetup& setup);

struct SensitivityErrorReport {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t degree = 0;
  std::uint64_t shots = 0;
  /// Largest realized node error |d_k - R(theta_k)|.
  double epsilon_true = 0.0;
  double epsilon_estimate = 0.0;
  double min_slope = 0.0;
  /// 5 epsilon_true ln(max(D, 2)) / min_slope.
  double bound = 0.0;
  /// max |Delta theta_exact - Delta theta_inferred|.
  double max_error = 0.0;
  double median_relative_error = 0.0;
  std::size_t divergent_points = 0;
  bool within_bound = false;

  std::vector<double> thetas;
  std::vector<double> exact;
  std::vector<double> inferred;
};

SensitivityErrorReport sensitivity_error_check(const ResponseSimulator& sim,
                                               const SensitivityCurve& exact, std::size_t degree,
                                               std::uint64_t shots, std::uint64_t seed);

SensitivityErrorReport sensitivity_error_check(const ResponseSimulator& sim, double lo, double hi,
                                               std::uint64_t shots, std::uint64_t seed,
                                               std::size_t points = 201);

/// g(theta) = alpha cos(beta theta + gamma) + zeta.
struct CosineFit {
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
  double zeta = 0.0;
  double residual_rms = 0.0;

  double operator()(double theta) const;
  double derivative(double theta) const;
};

/// Least squares: grid over beta in [0.5, beta_max] (step 0.25) and gamma
/// (step pi/16) with alpha, zeta solved linearly, then Gauss-Newton.
/// Normalized so that alpha >= 0 and gamma in [0, 2 pi).
CosineFit cosine_fit(std::span<const double> thetas, std::span<const double> values,
                     double beta_max);

/// beta_max = D + 0.5 for the node set's degree D.
CosineFit cosine_fit(const SampleVector& samples);

nlohmann::json to_json(const InferenceResult& result);
nlohmann::json to_json(const EstimationOutcome& outcome);
nlohmann::json to_json(const SensitivityPoint& point);
nlohmann::json to_json(const CosineFit& fit);
nlohmann::json to_json(const SensitivityErrorReport& report);

}  // namespace infersense
