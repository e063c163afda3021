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
#include <filesystem>
#include <string>
#include <vector>

#include "infersense/inference.h"
#include "infersense/setup.h"
#include "json.hpp"

namespace infersense {

enum class StudyKind { inference, prediction, sensitivity };

std::string_view study_kind_name(StudyKind kind);
StudyKind study_kind_from_name(std::string_view name);

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Parsed from JSON; see README for the schema. Unknown keys are rejected.
struct ExperimentConfig {
  StudyKind study = StudyKind::inference;
  SetupKind setup = SetupKind::ghz;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  /// Base per-gate depolarizing rate.
  double noise = 0.0;
  /// Multiplier on `noise`; the prediction study defaults to 20.
  double noise_scale = 1.0;
  ShotsPolicy shots = ShotsPolicy::paper();
  std::size_t repeats = 30;
  std::uint64_t seed = kDefaultSeed;
  /// Empty means no files are written.
  std::filesystem::path output;
  std::size_t layers = 4;
  std::size_t test_points = 10000;
  /// Unknown parameters per repeat in the prediction study.
  std::size_t predictions = 30;
  std::size_t sensitivity_points = 201;
  /// 0 picks the worker_count() default.
  std::size_t workers = 0;

  double effective_noise() const { return noise * noise_scale; }
  void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);

/// Per-(n, repeat) outcome of the inference study.
struct InferenceTrial {
  std::size_t n = 0;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  double epsilon_true = 0.0;
  double epsilon_estimate = 0.0;
  double median_error = 0.0;
  double max_error = 0.0;
  /// 5 epsilon_true ln(max(D, 2)).
  double bound_true = 0.0;
};

struct ScalingRecord {
  std::size_t n = 0;
  std::size_t degree = 0;
  std::uint64_t shots = 0;
  std::size_t trials = 0;
  /// Median over trials of the per-trial median |R - R~|.
  double median_error = 0.0;
  /// Max over trials of the per-trial max |R - R~|.
  double max_error = 0.0;
  /// Median over trials of 5 epsilon_true ln(max(D, 2)).
  double bound_value = 0.0;
  /// Trials whose max error is not strictly below their own bound.
  std::size_t bound_violations = 0;
  double runtime_seconds = 0.0;
};

struct InferenceStudy {
  std::vector<ScalingRecord> records;
  std::vector<InferenceTrial> trials;
};

struct PredictionSample {
  std::size_t n = 0;
  std::size_t repeat = 0;
  std::size_t index = 0;
  double theta_true = 0.0;
  double measured = 0.0;
  double theta_inferred = 0.0;
  double theta_fit = 0.0;
  double error_inferred = 0.0;
  double error_fit = 0.0;
  /// R~ is monotone on the search window, so the inversion is unique.
  bool bijective = false;
};

struct PredictionRecord {
  std::size_t n = 0;
  std::uint64_t shots = 0;
  std::size_t samples = 0;
  /// pi / 10n.
  double window = 0.0;
  double median_inferred = 0.0;
  double upper_quartile_inferred = 0.0;
  double max_inferred = 0.0;
  double median_fit = 0.0;
  double upper_quartile_fit = 0.0;
  double max_fit = 0.0;
  /// Windows on which R~ is not monotone, typically around an extremum.
  std::size_t non_bijective = 0;
  double runtime_seconds = 0.0;
};

struct PredictionStudy {
  std::vector<PredictionRecord> records;
  std::vector<PredictionSample> samples;
};

struct SensitivityTrial {
  std::size_t n = 0;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  double epsilon_true = 0.0;
  double bound = 0.0;
  double max_error = 0.0;
  double median_relative_error = 0.0;
  bool within_bound = false;
};

struct SensitivityRecord {
  std::size_t n = 0;
  std::size_t degree = 0;
  std::uint64_t shots = 0;
  std::size_t trials = 0;
  double lo = 0.0;
  double hi = 0.0;
  double min_slope = 0.0;
  /// Smallest exact (Delta theta)^2 over the range.
  double min_exact_sensitivity = 0.0;
  double median_relative_error = 0.0;
  double max_error = 0.0;
  std::size_t bound_violations = 0;
  double runtime_seconds = 0.0;
};

struct SensitivityStudy {
  std::vector<SensitivityRecord> records;
  std::vector<SensitivityTrial> trials;
};

/// Median and linear-interpolated quantile used by all summaries.
double median(std::vector<double> values);
double quantile(std::vector<double> values, double q);

InferenceStudy run_inference_study(const ExperimentConfig& config);
PredictionStudy run_prediction_study(const ExperimentConfig& config);
SensitivityStudy run_sensitivity_study(const ExperimentConfig& config);

/// Dispatches on config.study and returns summary.json's content.
nlohmann::json run_study(const ExperimentConfig& config);

nlohmann::json summary_json(const ExperimentConfig& config, const InferenceStudy& study);
nlohmann::json summary_json(const ExperimentConfig& config, const PredictionStudy& study);
nlohmann::json summary_json(const ExperimentConfig& config, const SensitivityStudy& study);

/// Reads a trials_<setup>_<n>.csv file written by the inference study.
std::vector<InferenceTrial> read_inference_trials_csv(const std::filesystem::path& path);

}  // namespace infersense
