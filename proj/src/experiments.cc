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

#include "infersense/experiments.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "infersense/parallel.h"
#include "infersense/random.h"

namespace infersense {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t n, std::size_t repeat) {
  return derive_seed(derive_seed(base, n), repeat);
}

std::size_t workers_for(const ExperimentConfig& config) {
  return config.workers ? config.workers : worker_count();
}

SensingSetup make_setup(const ExperimentConfig& config, std::size_t n) {
  NoisePreset noise = config.effective_noise() > 0.0
                          ? NoisePreset::depolarizing(config.effective_noise())
                          : NoisePreset::none();
  return build_setup(config.setup, n, noise, config.seed, config.layers);
}

std::string file_stem(const ExperimentConfig& config, std::size_t n) {
  return std::string(setup_kind_name(config.setup)) + "_" + std::to_string(n);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

void prepare_output(const ExperimentConfig& config) {
  if (config.output.empty()) return;
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec || !fs::is_directory(config.output)) {
    throw std::runtime_error("output directory not writable: " + config.output.string());
  }
  write_text(config.output / "config.json", to_json(config).dump(2) + "\n");
}

std::vector<double> exact_on_grid(const ResponseSimulator& sim, const std::vector<double>& grid,
                                  std::size_t workers) {
  std::vector<double> out(grid.size());
  const std::size_t chunk = 256;
  const std::size_t chunks = (grid.size() + chunk - 1) / chunk;
  parallel_for(
      chunks,
      [&](std::size_t c) {
        for (std::size_t i = c * chunk; i < std::min(grid.size(), (c + 1) * chunk); ++i) {
          out[i] = sim.response(grid[i]);
        }
      },
      workers);
  return out;
}

std::vector<std::size_t> n_values(const ExperimentConfig& config) {
  std::vector<std::size_t> ns;
  for (std::size_t n = config.n_min; n <= config.n_max; ++n) ns.push_back(n);
  return ns;
}

}  // namespace

std::string_view study_kind_name(StudyKind kind) {
  switch (kind) {
    case StudyKind::inference:
      return "inference";
    case StudyKind::prediction:
      return "prediction";
    case StudyKind::sensitivity:
      return "sensitivity";
  }
  return "inference";
}

StudyKind study_kind_from_name(std::string_view name) {
  if (name == "inference") return StudyKind::inference;
  if (name == "prediction") return StudyKind::prediction;
  if (name == "sensitivity") return StudyKind::sensitivity;
  throw std::invalid_argument("unknown study '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (setup == SetupKind::custom) {
    throw std::invalid_argument("studies run on built-in setups only");
  }
  if (n_min == 0 || n_max < n_min) {
    throw std::invalid_argument("n range must be nonempty with n_min >= 1");
  }
  if (repeats == 0) {
    throw std::invalid_argument("repeats must be at least 1");
  }
  if (!(noise >= 0.0) || !(noise_scale >= 0.0) || effective_noise() > 1.0) {
    throw std::invalid_argument("noise rate times scale must lie in [0, 1]");
  }
  if (test_points == 0 || predictions == 0 || sensitivity_points == 0) {
    throw std::invalid_argument("point counts must be positive");
  }
  std::size_t cap = effective_noise() > 0.0 ? 8 : 12;
  if (n_max > cap) {
    throw std::invalid_argument("n_max " + std::to_string(n_max) + " exceeds the study cap of " +
                                std::to_string(cap) +
                                (effective_noise() > 0.0 ? " for noisy setups" : ""));
  }
  if (setup != SetupKind::ghz && n_min < 2) {
    throw std::invalid_argument("squeezing and random setups need n >= 2");
  }
  if (study == StudyKind::prediction && setup != SetupKind::ghz) {
    throw std::invalid_argument("the prediction study runs on the ghz setup");
  }
  if (study == StudyKind::sensitivity && setup == SetupKind::random_ansatz) {
    throw std::invalid_argument("the sensitivity study runs on ghz or squeezing setups");
  }
}

ExperimentConfig experiment_config_from_json(const json& doc) {
  static const std::set<std::string> known{
      "study",   "setup",  "n_min",       "n_max",       "n",           "noise",
      "noise_scale", "shots", "repeats",  "seed",        "output",      "layers",
      "test_points", "predictions", "sensitivity_points", "workers"};
  if (!doc.is_object()) {
    throw std::invalid_argument("experiment config must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  try {
    ExperimentConfig c;
    c.study = study_kind_from_name(doc.value("study", std::string("inference")));
    c.setup = setup_kind_from_name(doc.value("setup", std::string("ghz")));
    if (doc.contains("n")) {
      const auto& n = doc.at("n");
      if (n.is_array()) {
        if (n.size() != 2) throw std::invalid_argument("\"n\" must be [min, max] or an integer");
        c.n_min = n[0].get<std::size_t>();
        c.n_max = n[1].get<std::size_t>();
      } else {
        c.n_min = c.n_max = n.get<std::size_t>();
      }
    }
    c.n_min = doc.value("n_min", c.n_min);
    c.n_max = doc.value("n_max", c.n_max);
    c.noise = doc.value("noise", c.noise);
    c.noise_scale = doc.value("noise_scale", c.study == StudyKind::prediction ? 20.0 : 1.0);
    if (doc.contains("shots")) {
      const auto& s = doc.at("shots");
      if (s.is_number_integer()) {
        if (s.get<std::int64_t>() < 1) throw std::invalid_argument("shots must be at least 1");
        c.shots = ShotsPolicy::fixed(s.get<std::uint64_t>());
      } else {
        c.shots = ShotsPolicy::parse(s.get<std::string>());
      }
    }
    c.repeats = doc.value("repeats", c.repeats);
    c.seed = doc.value("seed", c.seed);
    c.output = doc.value("output", std::string());
    c.layers = doc.value("layers", c.layers);
    c.test_points = doc.value("test_points", c.test_points);
    c.predictions = doc.value("predictions", c.predictions);
    c.sensitivity_points = doc.value("sensitivity_points", c.sensitivity_points);
    c.workers = doc.value("workers", c.workers);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed experiment config: ") + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  // Worker count is excluded: it never changes results.
  return json{{"study", study_kind_name(c.study)},
              {"setup", setup_kind_name(c.setup)},
              {"n_min", c.n_min},
              {"n_max", c.n_max},
              {"noise", c.noise},
              {"noise_scale", c.noise_scale},
              {"shots", c.shots.str()},
              {"repeats", c.repeats},
              {"seed", c.seed},
              {"output", c.output.string()},
              {"layers", c.layers},
              {"test_points", c.test_points},
              {"predictions", c.predictions},
              {"sensitivity_points", c.sensitivity_points}};
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw std::invalid_argument("quantile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return frac == 0.0 ? values[lo] : values[lo] + frac * (values[hi] - values[lo]);
}

InferenceStudy run_inference_study(const ExperimentConfig& config) {
  config.validate();
  prepare_output(config);
  const std::size_t workers = workers_for(config);
  const auto grid = uniform_grid(0.0, 2.0 * kPi, config.test_points);
  const auto curve_grid = uniform_grid(0.0, 2.0 * kPi, 1000);
  InferenceStudy study;
  json timing = json::object();

  for (std::size_t n : n_values(config)) {
    auto start = Clock::now();
    ResponseSimulator sim(make_setup(config, n));
    const std::size_t degree = default_degree(sim.setup());
    const std::uint64_t shots = config.shots.shots_for(degree);
    const auto exact = exact_on_grid(sim, grid, workers);
    const NodeSet nodes = equidistant_nodes(degree);
    std::vector<double> exact_nodes(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) exact_nodes[k] = sim.response(nodes[k]);

    std::vector<InferenceTrial> trials(config.repeats);
    std::vector<TrigPoly> polys(config.repeats);
    parallel_for(
        config.repeats,
        [&](std::size_t r) {
          InferenceTrial t;
          t.n = n;
          t.repeat = r;
          t.seed = trial_seed(config.seed, n, r);
          t.shots = shots;
          auto inf = infer_response(sim, degree, shots, t.seed);
          for (std::size_t k = 0; k < nodes.size(); ++k) {
            t.epsilon_true = std::max(t.epsilon_true, std::abs(inf.samples.values[k] - exact_nodes[k]));
          }
          t.epsilon_estimate = inf.epsilon_estimate;
          std::vector<double> err(grid.size());
          for (std::size_t i = 0; i < grid.size(); ++i) {
            err[i] = std::abs(exact[i] - inf.poly(grid[i]));
            t.max_error = std::max(t.max_error, err[i]);
          }
          t.median_error = median(std::move(err));
          t.bound_true = error_bound(t.epsilon_true, std::max<std::size_t>(degree, 2));
          trials[r] = t;
          polys[r] = std::move(inf.poly);
        },
        workers);

    ScalingRecord rec;
    rec.n = n;
    rec.degree = degree;
    rec.shots = shots;
    rec.trials = trials.size();
    std::vector<double> medians, bounds;
    for (const auto& t : trials) {
      medians.push_back(t.median_error);
      bounds.push_back(t.bound_true);
      rec.max_error = std::max(rec.max_error, t.max_error);
      if (!(t.max_error < t.bound_true)) ++rec.bound_violations;
    }
    rec.median_error = median(medians);
    rec.bound_value = median(bounds);
    rec.runtime_seconds = seconds_since(start);
    study.records.push_back(rec);
    study.trials.insert(study.trials.end(), trials.begin(), trials.end());
    timing[std::to_string(n)] = rec.runtime_seconds;

    if (!config.output.empty()) {
      std::ostringstream csv;
      write_curve_csv(csv, polys.front(), curve_grid);
      write_text(config.output / ("curves_" + file_stem(config, n) + ".csv"), csv.str());
      std::ostringstream tcsv;
      tcsv << "n,repeat,seed,shots,epsilon_true,epsilon_estimate,median_error,max_error,bound\n";
      for (const auto& t : trials) {
        tcsv << t.n << ',' << t.repeat << ',' << t.seed << ',' << t.shots << ','
             << format_double(t.epsilon_true) << ',' << format_double(t.epsilon_estimate) << ','
             << format_double(t.median_error) << ',' << format_double(t.max_error) << ','
             << format_double(t.bound_true) << '\n';
      }
      write_text(config.output / ("trials_" + file_stem(config, n) + ".csv"), tcsv.str());
    }
  }
  if (!config.output.empty()) {
    write_text(config.output / "summary.json", summary_json(config, study).dump(2) + "\n");
    write_text(config.output / "timing.json", timing.dump(2) + "\n");
  }
  return study;
}

PredictionStudy run_prediction_study(const ExperimentConfig& config) {
  config.validate();
  prepare_output(config);
  const std::size_t workers = workers_for(config);
  PredictionStudy study;
  json timing = json::object();

  for (std::size_t n : n_values(config)) {
    auto start = Clock::now();
    ResponseSimulator sim(make_setup(config, n));
    const std::size_t degree = default_degree(sim.setup());
    const std::uint64_t shots = config.shots.shots_for(degree);
    const double window = kPi / (10.0 * static_cast<double>(n));

    std::vector<std::vector<PredictionSample>> per_repeat(config.repeats);
    parallel_for(
        config.repeats,
        [&](std::size_t r) {
          std::uint64_t seed = trial_seed(config.seed, n, r);
          auto inf = infer_response(sim, degree, shots, derive_seed(seed, 0));
          CosineFit fit = cosine_fit(inf.samples);
          Rng rng(derive_seed(seed, 1));
          for (std::size_t i = 0; i < config.predictions; ++i) {
            PredictionSample p;
            p.n = n;
            p.repeat = r;
            p.index = i;
            p.theta_true = uniform(rng, 0.0, 2.0 * kPi);
            p.measured = shots == 0 ? sim.response(p.theta_true)
                                    : sim.sample(p.theta_true, shots, derive_seed(seed, 2 + i)).mean;
            double lo = p.theta_true - window, hi = p.theta_true + window;
            auto est = estimate_parameter(inf.poly, p.measured, lo, hi);
            p.theta_inferred = est.theta;
            p.bijective = est.bijective;
            p.theta_fit = estimate_parameter([&](double t) { return fit(t); },
                                             [&](double t) { return fit.derivative(t); },
                                             p.measured, lo, hi)
                              .theta;
            p.error_inferred = std::abs(p.theta_inferred - p.theta_true);
            p.error_fit = std::abs(p.theta_fit - p.theta_true);
            per_repeat[r].push_back(p);
          }
        },
        workers);

    PredictionRecord rec;
    rec.n = n;
    rec.shots = shots;
    rec.window = window;
    std::vector<double> ei, ef;
    std::vector<PredictionSample> flat;
    for (const auto& rs : per_repeat) {
      for (const auto& p : rs) {
        ei.push_back(p.error_inferred);
        ef.push_back(p.error_fit);
        if (!p.bijective) ++rec.non_bijective;
        flat.push_back(p);
      }
    }
    rec.samples = flat.size();
    rec.median_inferred = median(ei);
    rec.upper_quartile_inferred = quantile(ei, 0.75);
    rec.max_inferred = *std::max_element(ei.begin(), ei.end());
    rec.median_fit = median(ef);
    rec.upper_quartile_fit = quantile(ef, 0.75);
    rec.max_fit = *std::max_element(ef.begin(), ef.end());
    rec.runtime_seconds = seconds_since(start);
    study.records.push_back(rec);
    timing[std::to_string(n)] = rec.runtime_seconds;

    if (!config.output.empty()) {
      std::ostringstream csv;
      csv << "n,repeat,index,theta_true,measured,theta_inferred,theta_fit,error_inferred,"
             "error_fit,bijective\n";
      for (const auto& p : flat) {
        csv << p.n << ',' << p.repeat << ',' << p.index << ',' << format_double(p.theta_true)
            << ',' << format_double(p.measured) << ',' << format_double(p.theta_inferred) << ','
            << format_double(p.theta_fit) << ',' << format_double(p.error_inferred) << ','
            << format_double(p.error_fit) << ',' << (p.bijective ? 1 : 0) << '\n';
      }
      write_text(config.output / ("predictions_" + file_stem(config, n) + ".csv"), csv.str());
    }
    study.samples.insert(study.samples.end(), flat.begin(), flat.end());
  }
  if (!config.output.empty()) {
    write_text(config.output / "summary.json", summary_json(config, study).dump(2) + "\n");
    write_text(config.output / "timing.json", timing.dump(2) + "\n");
  }
  return study;
}

SensitivityStudy run_sensitivity_study(const ExperimentConfig& config) {
  config.validate();
  prepare_output(config);
  const std::size_t workers = workers_for(config);
  SensitivityStudy study;
  json timing = json::object();

  for (std::size_t n : n_values(config)) {
    auto start = Clock::now();
    ResponseSimulator sim(make_setup(config, n));
    const std::size_t degree = default_degree(sim.setup());
    const std::uint64_t shots = config.shots.shots_for(degree);
    auto [lo, hi] = default_sensitivity_range(sim.setup());
    const auto grid = sensitivity_grid(lo, hi, config.sensitivity_points);
    const SensitivityCurve exact = exact_sensitivity_curve(sim, grid);

    std::vector<SensitivityTrial> trials(config.repeats);
    std::vector<SensitivityErrorReport> reports(config.repeats);
    parallel_for(
        config.repeats,
        [&](std::size_t r) {
          std::uint64_t seed = trial_seed(config.seed, n, r);
          auto rep = sensitivity_error_check(sim, exact, degree, shots, seed);
          SensitivityTrial t;
          t.n = n;
          t.repeat = r;
          t.seed = seed;
          t.epsilon_true = rep.epsilon_true;
          t.bound = rep.bound;
          t.max_error = rep.max_error;
          t.median_relative_error = rep.median_relative_error;
          t.within_bound = rep.within_bound;
          trials[r] = t;
          reports[r] = std::move(rep);
        },
        workers);

    SensitivityRecord rec;
    rec.n = n;
    rec.degree = degree;
    rec.shots = shots;
    rec.trials = trials.size();
    rec.lo = lo;
    rec.hi = hi;
    rec.min_slope = exact.min_slope;
    rec.min_exact_sensitivity = std::numeric_limits<double>::infinity();
    for (const auto& p : exact.points) {
      rec.min_exact_sensitivity = std::min(rec.min_exact_sensitivity, p.sensitivity);
    }
    std::vector<double> rel;
    for (const auto& t : trials) {
      rel.push_back(t.median_relative_error);
      rec.max_error = std::max(rec.max_error, t.max_error);
      if (!t.within_bound) ++rec.bound_violations;
    }
    rec.median_relative_error = median(rel);
    rec.runtime_seconds = seconds_since(start);
    study.records.push_back(rec);
    study.trials.insert(study.trials.end(), trials.begin(), trials.end());
    timing[std::to_string(n)] = rec.runtime_seconds;

    if (!config.output.empty()) {
      const auto& rep = reports.front();
      std::ostringstream csv;
      csv << "theta,exact,inferred,divergent\n";
      for (std::size_t i = 0; i < rep.thetas.size(); ++i) {
        bool div = !std::isfinite(rep.exact[i]) || !std::isfinite(rep.inferred[i]);
        csv << format_double(rep.thetas[i]) << ',' << format_double(rep.exact[i]) << ','
            << format_double(rep.inferred[i]) << ',' << (div ? 1 : 0) << '\n';
      }
      write_text(config.output / ("sensitivity_" + file_stem(config, n) + ".csv"), csv.str());

      // Whole window (-pi/n, pi/n), which contains the vanishing-slope points.
      auto inf = infer_response(sim, degree, shots, trial_seed(config.seed, n, 0));
      const double w = kPi / static_cast<double>(n);
      std::ostringstream full;
      full << "theta,exact,inferred,divergent\n";
      for (double t : uniform_grid(-w, w, 2 * config.sensitivity_points + 1, true)) {
        auto ex = sensitivity_exact(sim, t);
        auto in = sensitivity_inferred(inf.poly, t);
        full << format_double(t) << ',' << format_double(ex.sensitivity) << ','
             << format_double(in.sensitivity) << ',' << ((ex.divergent || in.divergent) ? 1 : 0)
             << '\n';
      }
      write_text(config.output / ("sensitivity_full_" + file_stem(config, n) + ".csv"),
                 full.str());

      std::ostringstream tcsv;
      tcsv << "n,repeat,seed,epsilon_true,bound,max_error,median_relative_error,within_bound\n";
      for (const auto& t : trials) {
        tcsv << t.n << ',' << t.repeat << ',' << t.seed << ',' << format_double(t.epsilon_true)
             << ',' << format_double(t.bound) << ',' << format_double(t.max_error) << ','
             << format_double(t.median_relative_error) << ',' << (t.within_bound ? 1 : 0) << '\n';
      }
      write_text(config.output / ("trials_" + file_stem(config, n) + ".csv"), tcsv.str());
    }
  }
  if (!config.output.empty()) {
    write_text(config.output / "summary.json", summary_json(config, study).dump(2) + "\n");
    write_text(config.output / "timing.json", timing.dump(2) + "\n");
  }
  return study;
}

json run_study(const ExperimentConfig& config) {
  switch (config.study) {
    case StudyKind::inference:
      return summary_json(config, run_inference_study(config));
    case StudyKind::prediction:
      return summary_json(config, run_prediction_study(config));
    case StudyKind::sensitivity:
      return summary_json(config, run_sensitivity_study(config));
  }
  return {};
}

json summary_json(const ExperimentConfig& config, const InferenceStudy& study) {
  json records = json::array();
  for (const auto& r : study.records) {
    records.push_back({{"n", r.n},
                       {"degree", r.degree},
                       {"shots", r.shots},
                       {"trials", r.trials},
                       {"median_error", r.median_error},
                       {"max_error", r.max_error},
                       {"bound_value", r.bound_value},
                       {"bound_violations", r.bound_violations}});
  }
  return json{{"study", "inference"},
              {"setup", setup_kind_name(config.setup)},
              {"shots", config.shots.str()},
              {"records", std::move(records)}};
}

json summary_json(const ExperimentConfig& config, const PredictionStudy& study) {
  json records = json::array();
  for (const auto& r : study.records) {
    records.push_back({{"n", r.n},
                       {"shots", r.shots},
                       {"samples", r.samples},
                       {"window", r.window},
                       {"median_inferred", r.median_inferred},
                       {"upper_quartile_inferred", r.upper_quartile_inferred},
                       {"max_inferred", r.max_inferred},
                       {"median_fit", r.median_fit},
                       {"upper_quartile_fit", r.upper_quartile_fit},
                       {"max_fit", r.max_fit},
                       {"non_bijective", r.non_bijective}});
  }
  return json{{"study", "prediction"},
              {"setup", setup_kind_name(config.setup)},
              {"shots", config.shots.str()},
              {"noise", config.effective_noise()},
              {"records", std::move(records)}};
}

json summary_json(const ExperimentConfig& config, const SensitivityStudy& study) {
  json records = json::array();
  for (const auto& r : study.records) {
    records.push_back({{"n", r.n},
                       {"degree", r.degree},
                       {"shots", r.shots},
                       {"trials", r.trials},
                       {"lo", r.lo},
                       {"hi", r.hi},
                       {"min_slope", r.min_slope},
                       {"min_exact_sensitivity", r.min_exact_sensitivity},
                       {"median_relative_error", r.median_relative_error},
                       {"max_error", r.max_error},
                       {"bound_violations", r.bound_violations}});
  }
  return json{{"study", "sensitivity"},
              {"setup", setup_kind_name(config.setup)},
              {"shots", config.shots.str()},
              {"records", std::move(records)}};
}

std::vector<InferenceTrial> read_inference_trials_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::string line;
  std::getline(in, line);
  std::vector<InferenceTrial> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 9) {
      throw std::runtime_error("malformed trial row in " + path.string());
    }
    InferenceTrial t;
    t.n = std::stoull(f[0]);
    t.repeat = std::stoull(f[1]);
    t.seed = std::stoull(f[2]);
    t.shots = std::stoull(f[3]);
    t.epsilon_true = std::stod(f[4]);
    t.epsilon_estimate = std::stod(f[5]);
    t.median_error = std::stod(f[6]);
    t.max_error = std::stod(f[7]);
    t.bound_true = std::stod(f[8]);
    out.push_back(t);
  }
  return out;
}

}  // namespace infersense
