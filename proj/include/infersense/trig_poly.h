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
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace infersense {

/// sum_{s=1..D} a_s cos(s theta) + b_s sin(s theta) + c.
///
/// a() and b() are 0-indexed: a()[s - 1] holds a_s.
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(std::vector<double> a, std::vector<double> b, double c);

  static TrigPoly constant(double c);
  static TrigPoly zero(std::size_t degree);
  /// amplitude * cos(s theta) or amplitude * sin(s theta).
  static TrigPoly cosine(std::size_t s, double amplitude = 1.0);
  static TrigPoly sine(std::size_t s, double amplitude = 1.0);

  std::size_t degree() const { return a_.size(); }
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  double c() const { return c_; }
  /// a_s and b_s for 1 <= s; zero beyond the degree.
  double cos_coeff(std::size_t s) const;
  double sin_coeff(std::size_t s) const;

  double operator()(double theta) const;
  TrigPoly derivative() const;
  /// Exact integral over [lo, hi]; requires lo <= hi.
  double integral(double lo, double hi) const;
  /// Largest |coefficient| over a, b and c.
  double max_abs_coeff() const;

  TrigPoly operator+(const TrigPoly& other) const;
  TrigPoly operator-(const TrigPoly& other) const;
  TrigPoly operator*(const TrigPoly& other) const;
  TrigPoly operator*(double scale) const;

  bool operator==(const TrigPoly&) const = default;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  double c_ = 0.0;
};

double eval(const TrigPoly& poly, double theta);
TrigPoly deriv(const TrigPoly& poly);
double definite_integral(const TrigPoly& poly, double lo, double hi);

nlohmann::json to_json(const TrigPoly& poly);
TrigPoly trig_poly_from_json(const nlohmann::json& doc);

/// "%.17g": enough digits to round-trip any double.
std::string format_double(double x);

/// Writes "theta,value" rows with 17 significant digits.
void write_curve_csv(std::ostream& out, std::span<const double> thetas,
                     std::span<const double> values, const std::string& value_header = "value");
void write_curve_csv(std::ostream& out, const TrigPoly& poly, std::span<const double> thetas);

/// `count` points evenly spaced over [lo, hi), or over [lo, hi] when
/// `include_end` is set.
std::vector<double> uniform_grid(double lo, double hi, std::size_t count, bool include_end = false);

/// 2D+1 sampling angles. Angles are kept as given; duplicate detection
/// canonicalizes them to [0, 2 pi).
class NodeSet {
 public:
  NodeSet() = default;
  /// Requires an odd, non-zero number of finite angles.
  explicit NodeSet(std::vector<double> angles);

  std::size_t degree() const { return (angles_.size() - 1) / 2; }
  std::size_t size() const { return angles_.size(); }
  const std::vector<double>& angles() const { return angles_; }
  double operator[](std::size_t k) const { return angles_[k]; }
  /// theta_k = 2 pi k / (2D+1) within 1e-12, in order.
  bool equidistant() const { return equidistant_; }

  /// Index pairs whose canonical angles lie within `tol` radians, measured
  /// around the circle.
  std::vector<std::pair<std::size_t, std::size_t>> near_duplicates(double tol = 1e-9) const;

 private:
  std::vector<double> angles_;
  bool equidistant_ = false;
};

NodeSet equidistant_nodes(std::size_t degree);

/// Reduces an angle to [0, 2 pi).
double canonical_angle(double theta);

/// Responses measured at a NodeSet. Shot counts and standard errors are
/// either empty or one per node; zero shots marks an exact value.
struct SampleVector {
  NodeSet nodes;
  std::vector<double> values;
  std::vector<std::uint64_t> shots;
  std::vector<double> std_errors;

  SampleVector() = default;
  SampleVector(NodeSet nodes, std::vector<double> values, std::vector<std::uint64_t> shots = {},
               std::vector<double> std_errors = {});

  std::size_t size() const { return values.size(); }
};

nlohmann::json to_json(const SampleVector& samples);

class SingularNodeSetError : public std::domain_error {
 public:
  SingularNodeSetError(const std::string& what,
                       std::vector<std::pair<std::size_t, std::size_t>> pairs);
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

/// Discrete Fourier formulas; exact inverse of the interpolation matrix on
/// equidistant nodes. Throws std::invalid_argument otherwise.
TrigPoly coeffs_closed_form(const SampleVector& samples);

struct ConditionReport {
  /// |det A| from the product formula.
  double det_abs = 0.0;
  /// Rejection threshold 1e-12 (2D+1)^((2D+1)/2).
  double det_threshold = 0.0;
  /// Row-norm lower bound on the smallest singular value of A. Reported
  /// only; it is loose.
  double sigma_min_lower_bound = 0.0;
};

nlohmann::json to_json(const ConditionReport& report);

struct LspSolution {
  TrigPoly poly;
  ConditionReport condition;
};

/// Builds A and solves A x = d by Gaussian elimination with partial
/// pivoting. Works for any distinct node set.
LspSolution solve_lsp(const SampleVector& samples);

/// The interpolation matrix, row k = [cos(j theta_k)]_j, [sin(j theta_k)]_j, 1.
std::vector<std::vector<double>> interpolation_matrix(const NodeSet& nodes);

/// 2^-D prod_{i<j} |e^{i theta_i} - e^{i theta_j}|, which equals |det A|.
double det_bound(const NodeSet& nodes);

}  // namespace infersense
