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

#include "infersense/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "infersense/experiments.h"
#include "infersense/inference.h"
#include "infersense/variational.h"

namespace infersense::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Bad flag values found after parsing; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SetupFlags {
  std::string kind = "ghz";
  std::size_t n = 0;
  double noise = 0.0;
  std::size_t layers = 4;
  std::string file;
};

void add_setup_flags(CLI::App* cmd, SetupFlags& f) {
  cmd->add_option("--setup", f.kind, "Built-in setup")
      ->check(CLI::IsMember({"ghz", "squeezing", "random"}));
  cmd->add_option("--n", f.n, "Qubit count");
  cmd->add_option("--noise", f.noise, "Per-gate depolarizing probability in [0, 1]");
  cmd->add_option("--layers", f.layers, "Ansatz layers for --setup random");
  cmd->add_option("--setup-file", f.file, "JSON setup document; overrides --setup and --n");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

SensingSetup make_setup(const SetupFlags& f, std::uint64_t seed) {
  if (!f.file.empty()) {
    try {
      return setup_from_json(read_json_file(f.file));
    } catch (const UsageError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  SetupKind kind = setup_kind_from_name(f.kind);
  std::size_t min_n = kind == SetupKind::ghz ? 1 : 2;
  if (f.n < min_n) {
    throw UsageError("--n must be at least " + std::to_string(min_n) + " for --setup " + f.kind);
  }
  if (f.n > 14) {
    throw UsageError("--n above the simulator cap of 14");
  }
  if (!(f.noise >= 0.0 && f.noise <= 1.0)) {
    throw UsageError("--noise must lie in [0, 1]");
  }
  if (f.noise > 0.0 && f.n > 10) {
    throw UsageError("noisy setups are capped at --n 10");
  }
  NoisePreset noise = f.noise > 0.0 ? NoisePreset::depolarizing(f.noise) : NoisePreset::none();
  return build_setup(kind, f.n, noise, seed, f.layers);
}

ShotsPolicy parse_shots(const std::string& text) {
  try {
    return ShotsPolicy::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--shots: ") + e.what());
  }
}

fs::path make_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) {
    throw std::runtime_error("cannot create output directory " + dir);
  }
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::string sensitivity_csv(const std::vector<SensitivityPoint>& points) {
  std::ostringstream csv;
  csv << "theta,value,divergent\n";
  for (const auto& p : points) {
    csv << format_double(p.theta) << ',' << format_double(p.sensitivity) << ','
        << (p.divergent ? 1 : 0) << '\n';
  }
  return csv.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trigonometric response inference for quantum sensing setups", "infersense"};
  app.require_subcommand(1);
  std::function<void()> action;

  // infer
  SetupFlags infer_setup;
  std::string infer_shots = "exact";
  std::uint64_t infer_seed = kDefaultSeed;
  std::size_t infer_degree = 0, infer_points = 1000;
  std::string infer_out;
  auto* infer = app.add_subcommand("infer", "Infer R(theta) from 2D+1 node measurements");
  add_setup_flags(infer, infer_setup);
  infer->add_option("--shots", infer_shots, "exact | INT | paper | budget:DELTA,A");
  infer->add_option("--seed", infer_seed, "Base RNG seed");
  infer->add_option("--degree", infer_degree, "Interpolation degree (default: term count L)");
  infer->add_option("--points", infer_points, "Rows in response.csv")->check(CLI::PositiveNumber);
  infer->add_option("--out", infer_out, "Output directory")->required();
  infer->callback([&] {
    action = [&] {
      SensingSetup setup = make_setup(infer_setup, infer_seed);
      ShotsPolicy policy = parse_shots(infer_shots);
      std::size_t degree = infer_degree ? infer_degree : default_degree(setup);
      auto result = infer_response(setup, degree, policy, infer_seed);
      fs::path dir = make_out_dir(infer_out);
      json doc{{"setup", setup_to_json(setup)},
               {"degree", degree},
               {"shots", policy.str()},
               {"seed", infer_seed},
               {"result", to_json(result)}};
      write_file(dir / "inference.json", doc.dump(2) + "\n");
      std::ostringstream csv;
      write_curve_csv(csv, result.poly, uniform_grid(0.0, 2.0 * kPi, infer_points));
      write_file(dir / "response.csv", csv.str());
      out << to_json(result.poly).dump() << "\n";
    };
  });

  // estimate
  std::string est_poly;
  double est_response = 0.0, est_lo = 0.0, est_hi = 0.0;
  auto* estimate = app.add_subcommand("estimate", "Invert a polynomial for the unknown parameter");
  estimate->add_option("--poly", est_poly, "Polynomial JSON, or an inference.json")->required();
  estimate->add_option("--response", est_response, "Measured response")->required();
  estimate->add_option("--lo", est_lo, "Window start (radians)")->required();
  estimate->add_option("--hi", est_hi, "Window end (radians)")->required();
  estimate->callback([&] {
    action = [&] {
      json doc = read_json_file(est_poly);
      if (doc.contains("result")) doc = doc.at("result");
      if (doc.contains("poly")) doc = doc.at("poly");
      TrigPoly poly;
      try {
        poly = trig_poly_from_json(doc);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!(est_lo < est_hi)) {
        throw UsageError("--lo must be below --hi");
      }
      out << to_json(estimate_parameter(poly, est_response, est_lo, est_hi)).dump() << "\n";
    };
  });

  // sensitivity
  SetupFlags sens_setup;
  std::string sens_mode = "exact", sens_shots = "exact", sens_out;
  std::uint64_t sens_seed = kDefaultSeed;
  std::optional<double> sens_lo, sens_hi;
  std::size_t sens_points = 201;
  auto* sens = app.add_subcommand("sensitivity", "Sensitivity curve (Delta theta)^2 over a range");
  add_setup_flags(sens, sens_setup);
  sens->add_option("--mode", sens_mode, "exact (simulator) or inferred (from R~)")
      ->check(CLI::IsMember({"exact", "inferred"}));
  sens->add_option("--shots", sens_shots, "Shots for --mode inferred");
  sens->add_option("--seed", sens_seed, "Base RNG seed");
  sens->add_option("--lo", sens_lo, "Range start (default per setup)");
  sens->add_option("--hi", sens_hi, "Range end (default per setup)");
  sens->add_option("--points", sens_points, "Interior grid points")->check(CLI::PositiveNumber);
  sens->add_option("--out", sens_out, "Output directory (default: JSON on stdout)");
  sens->callback([&] {
    action = [&] {
      SensingSetup setup = make_setup(sens_setup, sens_seed);
      auto [lo, hi] = default_sensitivity_range(setup);
      lo = sens_lo.value_or(lo);
      hi = sens_hi.value_or(hi);
      if (!(lo < hi)) throw UsageError("--lo must be below --hi");
      ResponseSimulator sim(setup);
      std::vector<SensitivityPoint> points;
      auto grid = sensitivity_grid(lo, hi, sens_points);
      if (sens_mode == "exact") {
        for (double t : grid) points.push_back(sensitivity_exact(sim, t));
      } else {
        if (!setup.observable.is_involutory()) {
          throw UsageError("--mode inferred needs an observable with O^2 = 1");
        }
        ShotsPolicy policy = parse_shots(sens_shots);
        std::size_t degree = default_degree(setup);
        auto inf = infer_response(sim, degree, policy.shots_for(degree), sens_seed);
        for (double t : grid) points.push_back(sensitivity_inferred(inf.poly, t));
      }
      json arr = json::array();
      for (const auto& p : points) arr.push_back(to_json(p));
      json doc{{"mode", sens_mode}, {"lo", lo}, {"hi", hi}, {"points", std::move(arr)}};
      if (sens_out.empty()) {
        out << doc.dump() << "\n";
      } else {
        fs::path dir = make_out_dir(sens_out);
        write_file(dir / "sensitivity.json", doc.dump(2) + "\n");
        write_file(dir / "sensitivity.csv", sensitivity_csv(points));
      }
    };
  });

  // budget
  std::size_t bud_n = 0;
  std::optional<double> bud_delta, bud_alpha;
  bool bud_paper = false;
  auto* budget = app.add_subcommand("budget", "Shots per node for a target inference error");
  budget->add_option("--n", bud_n, "Qubit count (degree)")->required();
  budget->add_option("--delta", bud_delta, "Target max inference error");
  budget->add_option("--alpha", bud_alpha, "Failure probability");
  budget->add_flag("--paper", bud_paper, "Print the fixed schedule 500 ln^2 n ln(200(2n+1))");
  budget->callback([&] {
    action = [&] {
      if (bud_n < 2) throw UsageError("--n must be at least 2");
      if (bud_paper) {
        out << paper_shot_schedule(bud_n) << "\n";
        return;
      }
      if (!bud_delta || !bud_alpha) throw UsageError("--delta and --alpha are required");
      if (!(*bud_delta > 0.0) || !(*bud_alpha > 0.0 && *bud_alpha < 1.0)) {
        throw UsageError("need --delta > 0 and 0 < --alpha < 1");
      }
      out << shot_budget(bud_n, *bud_delta, *bud_alpha) << "\n";
    };
  });

  // study
  std::string study_config, study_out;
  std::optional<std::uint64_t> study_seed;
  std::size_t study_workers = 0;
  auto* study = app.add_subcommand("study", "Run an inference, prediction or sensitivity study");
  study->add_option("--config", study_config, "Study config JSON")->required();
  study->add_option("--out", study_out, "Output directory (overrides the config)");
  study->add_option("--seed", study_seed, "Base seed (overrides the config)");
  study->add_option("--workers", study_workers, "Worker threads (results do not depend on it)");
  study->callback([&] {
    action = [&] {
      ExperimentConfig config;
      try {
        config = experiment_config_from_json(read_json_file(study_config));
        if (!study_out.empty()) config.output = study_out;
        if (study_seed) config.seed = *study_seed;
        if (study_workers) config.workers = study_workers;
        config.validate();
      } catch (const UsageError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      out << run_study(config).dump(2) << "\n";
    };
  });

  // train
  std::size_t train_n = 4, train_epochs = 500, train_points = 201;
  std::uint64_t train_seed = kDefaultSeed;
  double train_step = 0.5;
  std::string train_out;
  auto* train = app.add_subcommand("train", "Train the measurement circuit on the GHZ probe");
  train->add_option("--n", train_n, "Qubit count (power of two)");
  train->add_option("--epochs", train_epochs, "Nelder-Mead iterations")
      ->check(CLI::PositiveNumber);
  train->add_option("--seed", train_seed, "Initial-parameter seed");
  train->add_option("--step", train_step, "Initial simplex edge (radians)")
      ->check(CLI::PositiveNumber);
  train->add_option("--points", train_points, "Sensitivity curve points")
      ->check(CLI::PositiveNumber);
  train->add_option("--out", train_out, "Output directory (default: summary on stdout only)");
  train->callback([&] {
    action = [&] {
      if (train_n < 2 || train_n > 8 || (train_n & (train_n - 1)) != 0) {
        throw UsageError("--n must be 2, 4 or 8");
      }
      TrainableMeasurement m(train_n);
      TrainingOptions opts;
      opts.epochs = train_epochs;
      opts.seed = train_seed;
      opts.optimizer.initial_step = train_step;
      opts.curve_points = train_points;
      auto trace = train_measurement(build_ghz_setup(train_n), m, opts);
      json full = to_json(trace);
      json summary{{"initial_loss", full["initial_loss"]},
                   {"final_loss", full["final_loss"]},
                   {"epochs", trace.losses.size() - 1},
                   {"restarts", trace.restarts},
                   {"min_pre_sensitivity", full["min_pre_sensitivity"]},
                   {"min_post_sensitivity", full["min_post_sensitivity"]}};
      if (!train_out.empty()) {
        fs::path dir = make_out_dir(train_out);
        write_file(dir / "training.json", full.dump(2) + "\n");
        write_file(dir / "sensitivity_pre.csv", sensitivity_csv(trace.pre_curve));
        write_file(dir / "sensitivity_post.csv", sensitivity_csv(trace.post_curve));
      }
      out << summary.dump(2) << "\n";
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!action) {
    err << "error: no command given\n";
    return kExitUsage;
  }
  try {
    action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace infersense::cli
