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

#include "infersense/inference.h"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "infersense/random.h"

namespace infersense {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::uint64_t shot_budget(std::size_t n, double delta, double a) {
  if (n < 2) {
    throw std::invalid_argument("shot_budget needs n >= 2 (ln^2(1) = 0)");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("shot_budget needs delta > 0");
  }
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("shot_budget needs 0 < a < 1");
  }
  double ln = std::log(static_cast<double>(n));
  double x = 50.0 * ln * ln * std::log((4.0 * static_cast<double>(n) + 2.0) / a) / (delta * delta);
  return static_cast<std::uint64_t>(std::ceil(x));
}

std::uint64_t paper_shot_schedule(std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("paper_shot_schedule needs n >= 2");
  }
  double ln = std::log(static_cast<double>(n));
  double x = 500.0 * ln * ln * std::log(200.0 * (2.0 * static_cast<double>(n) + 1.0));
  return static_cast<std::uint64_t>(std::ceil(x));
}

double error_bound(double eps, std::size_t n) {
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("error_bound needs eps >= 0");
  }
  if (n < 2) {
    throw std::invalid_argument("error_bound needs n >= 2");
  }
  return 5.0 * eps * std::log(static_cast<double>(n));
}

ShotsPolicy ShotsPolicy::fixed(std::uint64_t shots) {
  if (shots == 0) {
    throw std::invalid_argument("fixed shot count must be at least 1");
  }
  ShotsPolicy p(Kind::fixed);
  p.shots_ = shots;
  return p;
}

ShotsPolicy ShotsPolicy::budget(double delta, double a) {
  if (!(delta > 0.0) || !(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("budget policy needs delta > 0 and 0 < a < 1");
  }
  ShotsPolicy p(Kind::budget);
  p.delta_ = delta;
  p.a_ = a;
  return p;
}

ShotsPolicy ShotsPolicy::parse(std::string_view text) {
  if (text == "exact") return exact();
  if (text == "paper") return paper();
  if (text.starts_with("budget:")) {
    auto rest = text.substr(7);
    auto comma = rest.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("budget policy is 'budget:DELTA,A'");
    }
    return budget(parse_double(rest.substr(0, comma)), parse_double(rest.substr(comma + 1)));
  }
  std::uint64_t shots = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), shots);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("shots must be exact, INT, paper or budget:DELTA,A; got '" +
                                std::string(text) + "'");
  }
  return fixed(shots);
}

std::string ShotsPolicy::str() const {
  switch (kind_) {
    case Kind::exact:
      return "exact";
    case Kind::fixed:
      return std::to_string(shots_);
    case Kind::paper:
      return "paper";
    case Kind::budget: {
      json tmp = json::array({delta_, a_});
      return "budget:" + tmp[0].dump() + "," + tmp[1].dump();
    }
  }
  return "exact";
}

std::uint64_t ShotsPolicy::shots_for(std::size_t degree) const {
  std::size_t n = std::max<std::size_t>(degree, 2);
  switch (kind_) {
    case Kind::exact:
      return 0;
    case Kind::fixed:
      return shots_;
    case Kind::paper:
      return paper_shot_schedule(n);
    case Kind::budget:
      return shot_budget(n, delta_, a_);
  }
  return 0;
}

InferenceResult infer_from_samples(SampleVector samples) {
  InferenceResult out;
  out.poly = coeffs_closed_form(samples);
  double max_se = 0.0;
  for (double se : samples.std_errors) max_se = std::max(max_se, se);
  out.epsilon_estimate = 3.0 * max_se;
  out.bound_value = error_bound(out.epsilon_estimate, std::max<std::size_t>(out.poly.degree(), 2));
  out.shots_per_node = samples.shots.empty() ? 0 : samples.shots.front();
  out.samples = std::move(samples);
  return out;
}

InferenceResult infer_response(const ResponseSimulator& sim, std::size_t degree,
                               std::uint64_t shots, std::uint64_t seed) {
  if (degree == 0) {
    throw std::invalid_argument("inference degree must be at least 1");
  }
  NodeSet nodes = equidistant_nodes(degree);
  std::vector<double> values(nodes.size());
  std::vector<double> errors(nodes.size(), 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (shots == 0) {
      values[k] = sim.response(nodes[k]);
    } else {
      auto est = sim.sample(nodes[k], shots, derive_seed(seed, k));
      values[k] = est.mean;
      errors[k] = est.std_error;
    }
  }
  std::vector<std::uint64_t> counts(nodes.size(), shots);
  return infer_from_samples(
      SampleVector(std::move(nodes), std::move(values), std::move(counts), std::move(errors)));
}

InferenceResult infer_response(const SensingSetup& setup, std::size_t degree,
                               const ShotsPolicy& policy, std::uint64_t seed,
                               SimulatorLimits limits) {
  ResponseSimulator sim(setup, limits);
  return infer_response(sim, degree, policy.shots_for(degree), seed);
}

EstimationOutcome estimate_parameter(const std::function<double(double)>& f,
                                     const std::function<double(double)>& df, double measured,
                                     double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("search window must satisfy lo < hi");
  }
  if (!std::isfinite(measured)) {
    throw std::invalid_argument("measured response must be finite");
  }
  EstimationOutcome out;
  out.lo = lo;
  out.hi = hi;

  bool pos = false, neg = false;
  for (double t : uniform_grid(lo, hi, 512, true)) {
    double d = df(t);
    pos |= d > 0.0;
    neg |= d < 0.0;
  }
  out.bijective = !(pos && neg);

  auto cost = [&](double t) { return std::abs(f(t) - measured); };
  auto grid = uniform_grid(lo, hi, 1024, true);
  std::size_t best = 0;
  double best_cost = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double c = cost(grid[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = cost(x1), f2 = cost(x2);
  while (b - a > 1e-10) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = cost(x2);
    }
  }
  double refined = 0.5 * (a + b);
  double refined_cost = cost(refined);
  if (refined_cost <= best_cost) {
    out.theta = refined;
    out.residual = refined_cost;
  } else {
    out.theta = grid[best];
    out.residual = best_cost;
  }
  return out;
}

EstimationOutcome estimate_parameter(const TrigPoly& poly, double measured, double lo,
                                     double hi) {
  TrigPoly d = poly.derivative();
  return estimate_parameter([&](double t) { return poly(t); }, [&](double t) { return d(t); },
                            measured, lo, hi);
}

namespace {

SensitivityPoint make_point(double theta, double variance, double slope) {
  SensitivityPoint p;
  p.theta = theta;
  p.variance = variance;
  p.slope = slope;
  p.divergent = std::abs(slope) < kSlopeFloor;
  p.sensitivity = p.divergent ? kInf : variance / (slope * slope);
  return p;
}

}  // namespace

SensitivityPoint sensitivity_exact(const ResponseSimulator& sim, double theta) {
  QuantumState state = sim.state_at(theta);
  const Observable& obs = sim.setup().observable;
  double r = state.expectation(obs);
  double var = std::max(0.0, state.expectation_of_square(obs) - r * r);
  return make_point(theta, var, sim.slope(theta));
}

SensitivityPoint sensitivity_inferred(const TrigPoly& poly, double theta) {
  double r = poly(theta);
  return make_point(theta, std::max(0.0, 1.0 - r * r), poly.derivative()(theta));
}

std::vector<double> sensitivity_grid(double lo, double hi, std::size_t points) {
  if (!(lo < hi) || points == 0) {
    throw std::invalid_argument("sensitivity range must satisfy lo < hi with at least one point");
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(points + 1);
  }
  return grid;
}

SensitivityCurve exact_sensitivity_curve(const ResponseSimulator& sim,
                                         std::span<const double> thetas) {
  SensitivityCurve curve;
  curve.min_slope = kInf;
  for (double t : thetas) {
    curve.points.push_back(sensitivity_exact(sim, t));
    curve.min_slope = std::min(curve.min_slope, std::abs(curve.points.back().slope));
  }
  return curve;
}

std::pair<double, double> default_sensitivity_range(const SensingSetup& setup) {
  double n = static_cast<double>(setup.num_qubits);
  if (setup.kind == SetupKind::ghz) {
    return {kPi / (6.0 * n), 5.0 * kPi / (6.0 * n)};
  }
  return {kPi / (3.0 * n), kPi / n};
}

SensitivityErrorReport sensitivity_error_check(const ResponseSimulator& sim,
                                               const SensitivityCurve& exact, std::size_t degree,
                                               std::uint64_t shots, std::uint64_t seed) {
  if (exact.points.empty()) {
    throw std::invalid_argument("empty sensitivity curve");
  }
  SensitivityErrorReport rep;
  rep.lo = exact.points.front().theta;
  rep.hi = exact.points.back().theta;
  rep.degree = degree;
  rep.shots = shots;
  InferenceResult inf = infer_response(sim, degree, shots, seed);
  for (std::size_t k = 0; k < inf.samples.size(); ++k) {
    double truth = sim.response(inf.samples.nodes[k]);
    rep.epsilon_true = std::max(rep.epsilon_true, std::abs(inf.samples.values[k] - truth));
  }
  rep.epsilon_estimate = inf.epsilon_estimate;
  rep.min_slope = exact.min_slope;
  rep.bound = rep.min_slope > 0.0
                  ? 5.0 * rep.epsilon_true * std::log(static_cast<double>(std::max<std::size_t>(
                                                 degree, 2))) /
                        rep.min_slope
                  : kInf;
  std::vector<double> rel;
  for (const auto& ex : exact.points) {
    SensitivityPoint in = sensitivity_inferred(inf.poly, ex.theta);
    rep.thetas.push_back(ex.theta);
    rep.exact.push_back(ex.sensitivity);
    rep.inferred.push_back(in.sensitivity);
    if (ex.divergent || in.divergent) {
      ++rep.divergent_points;
      rep.max_error = kInf;
      continue;
    }
    double a = std::sqrt(ex.sensitivity);
    double b = std::sqrt(in.sensitivity);
    rep.max_error = std::max(rep.max_error, std::abs(a - b));
    rel.push_back(std::abs(a - b) / a);
  }
  rep.median_relative_error = rel.empty() ? kInf : median_of(rel);
  // The 1e-8 slack absorbs floating-point rounding when epsilon is zero.
  rep.within_bound = rep.divergent_points == 0 && rep.max_error <= rep.bound + 1e-8;
  return rep;
}

SensitivityErrorReport sensitivity_error_check(const ResponseSimulator& sim, double lo, double hi,
                                               std::uint64_t shots, std::uint64_t seed,
                                               std::size_t points) {
  auto grid = sensitivity_grid(lo, hi, points);
  auto curve = exact_sensitivity_curve(sim, grid);
  return sensitivity_error_check(sim, curve, default_degree(sim.setup()), shots, seed);
}

double CosineFit::operator()(double theta) const {
  return alpha * std::cos(beta * theta + gamma) + zeta;
}

double CosineFit::derivative(double theta) const {
  return -alpha * beta * std::sin(beta * theta + gamma);
}

namespace {

double sse(const CosineFit& g, std::span<const double> t, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    double r = g(t[k]) - y[k];
    s += r * r;
  }
  return s;
}

// Best alpha, zeta for fixed beta, gamma.
CosineFit linear_fit(double beta, double gamma, std::span<const double> t,
                     std::span<const double> y) {
  double su = 0, suu = 0, sy = 0, suy = 0;
  const double k = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    double u = std::cos(beta * t[i] + gamma);
    su += u;
    suu += u * u;
    sy += y[i];
    suy += u * y[i];
  }
  CosineFit g;
  g.beta = beta;
  g.gamma = gamma;
  double det = suu * k - su * su;
  if (std::abs(det) < 1e-12 * std::max(1.0, suu * k)) {
    g.alpha = 0.0;
    g.zeta = sy / k;
  } else {
    g.alpha = (suy * k - su * sy) / det;
    g.zeta = (suu * sy - su * suy) / det;
  }
  return g;
}

CosineFit normalize(CosineFit g) {
  if (g.beta < 0) {
    g.beta = -g.beta;
    g.gamma = -g.gamma;
  }
  if (g.alpha < 0) {
    g.alpha = -g.alpha;
    g.gamma += kPi;
  }
  g.gamma = canonical_angle(g.gamma);
  return g;
}

}  // namespace

CosineFit cosine_fit(std::span<const double> t, std::span<const double> y, double beta_max) {
  if (t.size() != y.size()) {
    throw std::invalid_argument("cosine_fit needs equal-length inputs");
  }
  if (t.size() < 4) {
    throw std::invalid_argument("cosine_fit needs at least 4 samples");
  }
  const double k = static_cast<double>(t.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= k;
  double spread = 0.0;
  for (double v : y) spread = std::max(spread, std::abs(v - mean));
  if (spread < 1e-14) {
    CosineFit g;
    g.zeta = mean;
    g.residual_rms = std::sqrt(sse(g, t, y) / k);
    return g;
  }

  CosineFit best;
  double best_sse = kInf;
  for (int bi = 0; 0.5 + 0.25 * bi <= beta_max + 1e-12; ++bi) {
    double beta = 0.5 + 0.25 * bi;
    for (int gi = 0; gi < 32; ++gi) {
      CosineFit g = linear_fit(beta, gi * kPi / 16.0, t, y);
      double s = sse(g, t, y);
      if (s < best_sse) {
        best_sse = s;
        best = g;
      }
    }
  }

  // Levenberg-damped Gauss-Newton on (alpha, beta, gamma, zeta).
  double lambda = 1e-3;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
    Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
    for (std::size_t i = 0; i < t.size(); ++i) {
      double phase = best.beta * t[i] + best.gamma;
      double c = std::cos(phase), s = std::sin(phase);
      Eigen::Vector4d j(c, -best.alpha * t[i] * s, -best.alpha * s, 1.0);
      double r = best.alpha * c + best.zeta - y[i];
      jtj += j * j.transpose();
      jtr += j * r;
    }
    bool improved = false;
    Eigen::Vector4d step = Eigen::Vector4d::Zero();
    for (int tries = 0; tries < 20 && !improved; ++tries) {
      Eigen::Matrix4d damped = jtj;
      damped.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
      step = damped.ldlt().solve(-jtr);
      CosineFit trial = best;
      trial.alpha += step[0];
      trial.beta += step[1];
      trial.gamma += step[2];
      trial.zeta += step[3];
      double s = sse(trial, t, y);
      if (std::isfinite(s) && s <= best_sse) {
        best = trial;
        best_sse = s;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved || step.norm() < 1e-10) {
      break;
    }
  }
  best = normalize(best);
  best.residual_rms = std::sqrt(best_sse / k);
  return best;
}

CosineFit cosine_fit(const SampleVector& samples) {
  return cosine_fit(samples.nodes.angles(), samples.values,
                    static_cast<double>(samples.nodes.degree()) + 0.5);
}

json to_json(const InferenceResult& result) {
  return json{{"poly", to_json(result.poly)},
              {"samples", to_json(result.samples)},
              {"shots_per_node", result.shots_per_node},
              {"epsilon_estimate", result.epsilon_estimate},
              {"bound_value", result.bound_value}};
}

json to_json(const EstimationOutcome& outcome) {
  return json{{"theta", outcome.theta},
              {"lo", outcome.lo},
              {"hi", outcome.hi},
              {"bijective", outcome.bijective},
              {"residual", outcome.residual}};
}

json to_json(const SensitivityPoint& point) {
  json s = point.divergent ? json(nullptr) : json(point.sensitivity);
  return json{{"theta", point.theta},
              {"variance", point.variance},
              {"slope", point.slope},
              {"sensitivity", s},
              {"divergent", point.divergent}};
}

json to_json(const CosineFit& fit) {
  return json{{"alpha", fit.alpha},
              {"beta", fit.beta},
              {"gamma", fit.gamma},
              {"zeta", fit.zeta},
              {"residual_rms", fit.residual_rms}};
}

json to_json(const SensitivityErrorReport& report) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json curve = json::array();
  for (std::size_t i = 0; i < report.thetas.size(); ++i) {
    curve.push_back({report.thetas[i], finite_or_null(report.exact[i]),
                     finite_or_null(report.inferred[i])});
  }
  return json{{"lo", report.lo},
              {"hi", report.hi},
              {"degree", report.degree},
              {"shots", report.shots},
              {"epsilon_true", report.epsilon_true},
              {"epsilon_estimate", report.epsilon_estimate},
              {"min_slope", report.min_slope},
              {"bound", finite_or_null(report.bound)},
              {"max_error", finite_or_null(report.max_error)},
              {"median_relative_error", finite_or_null(report.median_relative_error)},
              {"divergent_points", report.divergent_points},
              {"within_bound", report.within_bound},
              {"curve", std::move(curve)}};
}

}  // namespace infersense
