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

#include "infersense/trig_poly.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace infersense {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Complex exponential coefficients z_k, k = -D..D, stored at index k + D.
std::vector<std::complex<double>> to_exponential(const TrigPoly& p) {
  const std::size_t d = p.degree();
  std::vector<std::complex<double>> z(2 * d + 1);
  z[d] = p.c();
  for (std::size_t s = 1; s <= d; ++s) {
    std::complex<double> v(p.a()[s - 1] / 2, -p.b()[s - 1] / 2);
    z[d + s] = v;
    z[d - s] = std::conj(v);
  }
  return z;
}

TrigPoly from_exponential(const std::vector<std::complex<double>>& z) {
  const std::size_t d = (z.size() - 1) / 2;
  std::vector<double> a(d), b(d);
  for (std::size_t s = 1; s <= d; ++s) {
    // Average the two halves so rounding cannot leave a non-real result.
    std::complex<double> v = 0.5 * (z[d + s] + std::conj(z[d - s]));
    a[s - 1] = 2 * v.real();
    b[s - 1] = -2 * v.imag();
  }
  return TrigPoly(std::move(a), std::move(b), z[d].real());
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

TrigPoly::TrigPoly(std::vector<double> a, std::vector<double> b, double c)
    : a_(std::move(a)), b_(std::move(b)), c_(c) {
  if (a_.size() != b_.size()) {
    throw std::invalid_argument("cosine and sine coefficient arrays differ in length");
  }
}

TrigPoly TrigPoly::constant(double c) { return TrigPoly({}, {}, c); }

TrigPoly TrigPoly::zero(std::size_t degree) {
  return TrigPoly(std::vector<double>(degree, 0.0), std::vector<double>(degree, 0.0), 0.0);
}

TrigPoly TrigPoly::cosine(std::size_t s, double amplitude) {
  if (s == 0) {
    return constant(amplitude);
  }
  TrigPoly p = zero(s);
  p.a_[s - 1] = amplitude;
  return p;
}

TrigPoly TrigPoly::sine(std::size_t s, double amplitude) {
  if (s == 0) {
    return constant(0.0);
  }
  TrigPoly p = zero(s);
  p.b_[s - 1] = amplitude;
  return p;
}

double TrigPoly::cos_coeff(std::size_t s) const {
  return s >= 1 && s <= a_.size() ? a_[s - 1] : 0.0;
}

double TrigPoly::sin_coeff(std::size_t s) const {
  return s >= 1 && s <= b_.size() ? b_[s - 1] : 0.0;
}

double TrigPoly::operator()(double theta) const {
  double total = c_;
  for (std::size_t s = 1; s <= a_.size(); ++s) {
    double x = static_cast<double>(s) * theta;
    total += a_[s - 1] * std::cos(x) + b_[s - 1] * std::sin(x);
  }
  return total;
}

TrigPoly TrigPoly::derivative() const {
  std::vector<double> a(a_.size()), b(b_.size());
  for (std::size_t s = 1; s <= a_.size(); ++s) {
    double k = static_cast<double>(s);
    a[s - 1] = k * b_[s - 1];
    b[s - 1] = -k * a_[s - 1];
  }
  return TrigPoly(std::move(a), std::move(b), 0.0);
}

double TrigPoly::integral(double lo, double hi) const {
  if (!(lo <= hi)) {
    throw std::invalid_argument("integral bounds must satisfy lo <= hi");
  }
  double total = c_ * (hi - lo);
  for (std::size_t s = 1; s <= a_.size(); ++s) {
    double k = static_cast<double>(s);
    total += a_[s - 1] * (std::sin(k * hi) - std::sin(k * lo)) / k;
    total -= b_[s - 1] * (std::cos(k * hi) - std::cos(k * lo)) / k;
  }
  return total;
}

double TrigPoly::max_abs_coeff() const {
  double m = std::abs(c_);
  for (std::size_t i = 0; i < a_.size(); ++i) {
    m = std::max({m, std::abs(a_[i]), std::abs(b_[i])});
  }
  return m;
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const {
  std::size_t d = std::max(degree(), other.degree());
  std::vector<double> a(d), b(d);
  for (std::size_t s = 1; s <= d; ++s) {
    a[s - 1] = cos_coeff(s) + other.cos_coeff(s);
    b[s - 1] = sin_coeff(s) + other.sin_coeff(s);
  }
  return TrigPoly(std::move(a), std::move(b), c_ + other.c_);
}

TrigPoly TrigPoly::operator-(const TrigPoly& other) const { return *this + other * -1.0; }

TrigPoly TrigPoly::operator*(double scale) const {
  std::vector<double> a(a_), b(b_);
  for (auto& v : a) v *= scale;
  for (auto& v : b) v *= scale;
  return TrigPoly(std::move(a), std::move(b), c_ * scale);
}

TrigPoly TrigPoly::operator*(const TrigPoly& other) const {
  auto x = to_exponential(*this);
  auto y = to_exponential(other);
  const std::size_t d = degree() + other.degree();
  std::vector<std::complex<double>> z(2 * d + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      z[i + j] += x[i] * y[j];
    }
  }
  return from_exponential(z);
}

double eval(const TrigPoly& poly, double theta) { return poly(theta); }
TrigPoly deriv(const TrigPoly& poly) { return poly.derivative(); }
double definite_integral(const TrigPoly& poly, double lo, double hi) {
  return poly.integral(lo, hi);
}

json to_json(const TrigPoly& poly) {
  return json{{"degree", poly.degree()}, {"a", poly.a()}, {"b", poly.b()}, {"c", poly.c()}};
}

TrigPoly trig_poly_from_json(const json& doc) {
  try {
    auto a = doc.at("a").get<std::vector<double>>();
    auto b = doc.at("b").get<std::vector<double>>();
    if (doc.contains("degree") && doc.at("degree").get<std::size_t>() != a.size()) {
      throw std::invalid_argument("declared degree does not match coefficient count");
    }
    return TrigPoly(std::move(a), std::move(b), doc.at("c").get<double>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed polynomial document: ") + e.what());
  }
}

void write_curve_csv(std::ostream& out, std::span<const double> thetas,
                     std::span<const double> values, const std::string& value_header) {
  if (thetas.size() != values.size()) {
    throw std::invalid_argument("curve columns differ in length");
  }
  out << "theta," << value_header << "\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    out << format_double(thetas[i]) << ',' << format_double(values[i]) << '\n';
  }
}

void write_curve_csv(std::ostream& out, const TrigPoly& poly, std::span<const double> thetas) {
  std::vector<double> values;
  values.reserve(thetas.size());
  for (double t : thetas) {
    values.push_back(poly(t));
  }
  write_curve_csv(out, thetas, values);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count, bool include_end) {
  std::vector<double> grid(count);
  if (count == 0) {
    return grid;
  }
  if (include_end && count == 1) {
    grid[0] = lo;
    return grid;
  }
  double denom = static_cast<double>(include_end ? count - 1 : count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / denom;
  }
  return grid;
}

double canonical_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0) {
    r += kTwoPi;
  }
  // fmod can round a tiny negative input up to exactly 2 pi.
  return r >= kTwoPi ? 0.0 : r;
}

NodeSet::NodeSet(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.empty() || angles_.size() % 2 == 0) {
    throw std::invalid_argument("a node set needs an odd number 2D+1 of angles");
  }
  for (double t : angles_) {
    if (!std::isfinite(t)) {
      throw std::invalid_argument("node angles must be finite");
    }
  }
  const double m = static_cast<double>(angles_.size());
  equidistant_ = true;
  for (std::size_t k = 0; k < angles_.size(); ++k) {
    if (std::abs(angles_[k] - kTwoPi * static_cast<double>(k) / m) > 1e-12) {
      equidistant_ = false;
      break;
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> NodeSet::near_duplicates(double tol) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<double> canon(angles_.size());
  std::transform(angles_.begin(), angles_.end(), canon.begin(), canonical_angle);
  for (std::size_t i = 0; i < canon.size(); ++i) {
    for (std::size_t j = i + 1; j < canon.size(); ++j) {
      double d = std::abs(canon[i] - canon[j]);
      d = std::min(d, kTwoPi - d);
      if (d <= tol) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

NodeSet equidistant_nodes(std::size_t degree) {
  const std::size_t m = 2 * degree + 1;
  std::vector<double> angles(m);
  for (std::size_t k = 0; k < m; ++k) {
    angles[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
  }
  return NodeSet(std::move(angles));
}

SampleVector::SampleVector(NodeSet nodes_in, std::vector<double> values_in,
                           std::vector<std::uint64_t> shots_in,
                           std::vector<double> std_errors_in)
    : nodes(std::move(nodes_in)),
      values(std::move(values_in)),
      shots(std::move(shots_in)),
      std_errors(std::move(std_errors_in)) {
  if (values.size() != nodes.size()) {
    throw std::invalid_argument("one sample value per node required");
  }
  if (!shots.empty() && shots.size() != nodes.size()) {
    throw std::invalid_argument("shot counts must be empty or one per node");
  }
  if (!std_errors.empty() && std_errors.size() != nodes.size()) {
    throw std::invalid_argument("standard errors must be empty or one per node");
  }
}

json to_json(const SampleVector& samples) {
  json out{{"nodes", samples.nodes.angles()}, {"values", samples.values}};
  if (!samples.shots.empty()) {
    out["shots"] = samples.shots;
  }
  if (!samples.std_errors.empty()) {
    out["std_errors"] = samples.std_errors;
  }
  return out;
}

SingularNodeSetError::SingularNodeSetError(const std::string& what,
                                           std::vector<std::pair<std::size_t, std::size_t>> pairs)
    : std::domain_error(what), pairs_(std::move(pairs)) {}

TrigPoly coeffs_closed_form(const SampleVector& samples) {
  const NodeSet& nodes = samples.nodes;
  if (!nodes.equidistant()) {
    throw std::invalid_argument("closed-form coefficients need equidistant nodes; use solve_lsp");
  }
  const std::size_t d = nodes.degree();
  const double m = static_cast<double>(nodes.size());
  std::vector<double> a(d, 0.0), b(d, 0.0);
  double c = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    c += samples.values[k];
  }
  c /= m;
  for (std::size_t s = 1; s <= d; ++s) {
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      // Reduce s*k mod m first so the phase argument stays small and exact.
      std::size_t idx = (s * k) % nodes.size();
      double phase = kTwoPi * static_cast<double>(idx) / m;
      sa += samples.values[k] * std::cos(phase);
      sb += samples.values[k] * std::sin(phase);
    }
    a[s - 1] = 2.0 * sa / m;
    b[s - 1] = 2.0 * sb / m;
  }
  return TrigPoly(std::move(a), std::move(b), c);
}

json to_json(const ConditionReport& report) {
  return json{{"det_abs", report.det_abs},
              {"det_threshold", report.det_threshold},
              {"sigma_min_lower_bound", report.sigma_min_lower_bound}};
}

std::vector<std::vector<double>> interpolation_matrix(const NodeSet& nodes) {
  const std::size_t d = nodes.degree();
  const std::size_t m = nodes.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 1; j <= d; ++j) {
      double x = static_cast<double>(j) * nodes[k];
      a[k][j - 1] = std::cos(x);
      a[k][d + j - 1] = std::sin(x);
    }
    a[k][m - 1] = 1.0;
  }
  return a;
}

double det_bound(const NodeSet& nodes) {
  const std::size_t m = nodes.size();
  double prod = std::ldexp(1.0, -static_cast<int>(nodes.degree()));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      prod *= 2.0 * std::abs(std::sin(0.5 * (nodes[i] - nodes[j])));
    }
  }
  return prod;
}

LspSolution solve_lsp(const SampleVector& samples) {
  const NodeSet& nodes = samples.nodes;
  const std::size_t d = nodes.degree();
  const std::size_t m = nodes.size();

  auto describe = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::ostringstream msg;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto [p, q] = pairs[i];
      msg << (i ? ", " : "") << "theta[" << p << "]=" << format_double(nodes[p]) << " ~ theta["
          << q << "]=" << format_double(nodes[q]);
    }
    return msg.str();
  };

  if (auto dups = nodes.near_duplicates(); !dups.empty()) {
    throw SingularNodeSetError("singular node set: duplicate nodes modulo 2 pi: " + describe(dups),
                               dups);
  }

  ConditionReport report;
  report.det_abs = det_bound(nodes);
  double half = static_cast<double>(m) / 2.0;
  report.det_threshold = 1e-12 * std::pow(static_cast<double>(m), half);
  if (report.det_abs < report.det_threshold) {
    // Name the closest pair; it is the dominant small factor.
    std::pair<std::size_t, std::size_t> worst{0, 0};
    double best = kTwoPi;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        double g = std::abs(canonical_angle(nodes[i]) - canonical_angle(nodes[j]));
        g = std::min(g, kTwoPi - g);
        if (g < best) {
          best = g;
          worst = {i, j};
        }
      }
    }
    throw SingularNodeSetError("ill-conditioned node set (|det A| = " +
                                   format_double(report.det_abs) + "); closest nodes " +
                                   describe({worst}),
                               {worst});
  }

  auto a = interpolation_matrix(nodes);
  double row_prod = 1.0;
  double row_min = std::sqrt(static_cast<double>(d) + 1.0);
  for (const auto& row : a) {
    double r = 0.0;
    for (double v : row) r += v * v;
    r = std::sqrt(r);
    row_prod *= r;
    row_min = std::min(row_min, r);
  }
  double md = static_cast<double>(m);
  report.sigma_min_lower_bound =
      std::pow((md - 1.0) / md, (md - 1.0) / 2.0) * report.det_abs * row_min / row_prod;

  // Gaussian elimination with partial pivoting on [A | d].
  std::vector<double> rhs = samples.values;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0.0) {
      throw SingularNodeSetError("singular interpolation matrix", {});
    }
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(m);
  for (std::size_t i = m; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < m; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  std::vector<double> ca(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(d));
  std::vector<double> sb(x.begin() + static_cast<std::ptrdiff_t>(d),
                         x.begin() + static_cast<std::ptrdiff_t>(2 * d));
  return {TrigPoly(std::move(ca), std::move(sb), x[m - 1]), report};
}

}  // namespace infersense
