// Copyright 2026 The pcid Authors
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

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pcid/rng.hpp"

namespace pcid {

struct UniformMeasure {
  double lower = 0.0;
  double upper = 1.0;
};

struct NormalMeasure {
  double mean = 0.0;
  double variance = 1.0;
};

/// Finite support; values strictly increasing, probabilities summing to one.
struct DiscreteMeasure {
  std::vector<double> values;
  std::vector<double> probabilities;
};

/// A named distribution over the reals used as the base measure of a
/// reinforced predictive, or as the whole predictive of the Gaussian models.
class BaseMeasure {
 public:
  using Repr = std::variant<UniformMeasure, NormalMeasure, DiscreteMeasure>;

  BaseMeasure() : BaseMeasure(Uniform(0.0, 1.0)) {}

  static BaseMeasure Uniform(double lower, double upper);
  static BaseMeasure Normal(double mean, double variance);
  /// Probabilities are normalized if they sum to one within 1e-9; duplicate
  /// values are merged.
  static BaseMeasure Discrete(std::vector<double> values,
                              std::vector<double> probabilities);
  static BaseMeasure PointMass(double value) { return Discrete({value}, {1.0}); }

  double Sample(RngStream& rng) const;
  double Mean() const { return RawMoment(1); }
  double Variance() const;
  /// E[X^k] for 0 <= k <= 4.
  double RawMoment(int k) const;
  /// P(X <= x).
  double Cdf(double x) const;
  /// P(X < x).
  double CdfLeft(double x) const;
  /// Smallest interval carrying all mass (normal: mean +/- 8 sd).
  std::pair<double, double> SupportBounds() const;
  /// Jump locations of the CDF (empty for the continuous kinds).
  std::span<const double> Jumps() const;
  bool IsContinuous() const { return !std::holds_alternative<DiscreteMeasure>(repr_); }

  std::string Describe() const;
  const Repr& repr() const { return repr_; }

 private:
  explicit BaseMeasure(Repr repr) : repr_(std::move(repr)) {}
  Repr repr_;
};

struct DegenerateWeight {
  double value = 1.0;
};
struct TwoPointWeight {
  double low = 1.0;
  double high = 3.0;
  double p_low = 0.5;
};
struct UniformWeight {
  double lower = 0.5;
  double upper = 1.5;
};
/// shift + Gamma(shape, scale); shift > 0 keeps E[1/W^2] finite.
struct ShiftedGammaWeight {
  double shape = 1.0;
  double scale = 1.0;
  double shift = 0.5;
};

/// Reinforcement weight law. Every member has support in (0, inf).
class WeightDistribution {
 public:
  using Repr =
      std::variant<DegenerateWeight, TwoPointWeight, UniformWeight, ShiftedGammaWeight>;

  WeightDistribution() : repr_(DegenerateWeight{}) {}
  explicit WeightDistribution(Repr repr);

  double Sample(RngStream& rng) const;
  bool IsDegenerate() const { return std::holds_alternative<DegenerateWeight>(repr_); }
  std::string Describe() const;
  const Repr& repr() const { return repr_; }

 private:
  Repr repr_;
};

struct Atom {
  double value;
  double weight;
};

/// Normalized mixture  base_probability * base + sum_k p_k delta_{x_k}.
///
/// Built from unnormalized weights (w0, W_1, ..., W_n). Atoms are kept sorted
/// by value with cumulative probabilities so CDF queries are O(log n).
/// Zero-weight atoms are dropped.
class MixtureDistribution {
 public:
  explicit MixtureDistribution(BaseMeasure base)
      : MixtureDistribution(std::move(base), 1.0, {}) {}
  MixtureDistribution(BaseMeasure base, double base_weight, std::vector<Atom> atoms);

  const BaseMeasure& base() const { return base_; }
  double base_probability() const { return base_probability_; }
  /// Atoms with normalized probabilities, sorted by value.
  std::span<const Atom> atoms() const { return atoms_; }
  /// base_probability + sum of atom probabilities (one up to rounding).
  double TotalProbability() const;

  double Mean() const { return RawMoment(1); }
  double Variance() const;
  /// E[X^k] for 0 <= k <= 4.
  double RawMoment(int k) const;
  /// E[p(X)] for a polynomial with coefficients c_0..c_d, d <= 4.
  double ExpectPolynomial(std::span<const double> coefficients) const;
  double Cdf(double x) const;
  double CdfLeft(double x) const;
  double Sample(RngStream& rng) const;

 private:
  BaseMeasure base_;
  double base_probability_ = 1.0;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;  // cumulative_[k] = sum_{j<=k} p_j
};

}  // namespace pcid
