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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pcid/engine.hpp"
#include "pcid/measures.hpp"

namespace pcid {

/// Per-path derived series, row-major (row n-1 = step n, K columns).
struct DerivedSeries {
  std::size_t coordinates = 0;
  std::size_t horizon = 0;
  std::vector<double> U;       // X_{n,i} - E[X_{n,i} | G_{n-1}]
  std::vector<double> dE;      // E[X_{n+1,i} | G_n] - E[X_{n,i} | G_{n-1}]
  std::vector<double> V;       // U - n dE
  std::vector<double> Xbar;    // running mean of X_{1..n,i}
  std::vector<double> S;       // sum_{k<=n} U_{k,i} / sqrt(n)
  std::vector<double> Stilde;  // sqrt(n) (Xbar_{n,i} - E[X_{n+1,i} | G_n])

  double At(const std::vector<double>& series, std::size_t n, std::size_t i) const {
    return series[(n - 1) * coordinates + i];
  }
};

/// U_{n,i}. Throws std::invalid_argument if the record lacks predictive
/// summaries.
std::vector<double> forecast_errors(const PathRecord& path);
/// dE_{n,i}, n = 1..horizon.
std::vector<double> prediction_increments(const PathRecord& path);

/// All derived series. Verifies that Stilde equals sum_{k<=n} V_{k,i}/sqrt(n)
/// and that sum_{k<=n} U_{k,i} = n Xbar_{n,i} - sum_{k<=n} E[X_{k,i}|G_{k-1}],
/// both to 1e-9 relative; throws IdentityViolation otherwise.
DerivedSeries scaled_sums(const PathRecord& path);

/// Streaming accumulator for S_n and Stilde_n of one coordinate. Feed the
/// predictive mean of X_n, then X_n, for n = 1, 2, ...
class ScaledSumAccumulator {
 public:
  /// `mean_before` = E[X_n | G_{n-1}], `mean_after` = E[X_{n+1} | G_n].
  void Add(double x, double mean_before, double mean_after);
  std::size_t count() const { return n_; }
  double S() const;
  double Stilde() const;
  /// Stilde through the V-telescoping route.
  double StildeFromV() const;
  /// Realized quadratic variations (1/n) sum U_k^2 and (1/n) sum V_k^2.
  double MeanSquareU() const;
  double MeanSquareV() const;

 private:
  std::size_t n_ = 0;
  double sum_x_ = 0.0;
  double sum_u_ = 0.0;
  double sum_v_ = 0.0;
  double sum_u2_ = 0.0;
  double sum_v2_ = 0.0;
  double last_mean_ = 0.0;
};

enum class SllnFunctional { kProductOfCoords, kLogSumOfCoords, kIdentity };
std::string_view to_string(SllnFunctional f);

/// (1/n) sum_{k<=n} f(X_k) for n = 1..horizon. kIdentity uses coordinate 0.
/// Throws std::domain_error for log-sum on non-positive data.
std::vector<double> slln_functionals(const PathRecord& path, SllnFunctional functional);

/// Exact sup_x |F_n(x) - G(x)| between the empirical CDF of `sample` and a
/// mixture CDF. Both one-sided limits are evaluated at every sample point,
/// every jump of G and a 512-point grid over the joint range.
double kolmogorov_distance(std::span<const double> sample, const MixtureDistribution& predictive);

/// Max over the 10x10 lower-orthant rectangles anchored at the empirical
/// deciles of | joint empirical - F_1 * F_2 |, for every coordinate pair.
/// `rows` is n x K row-major.
double joint_rectangle_distance(std::span<const double> rows, std::size_t coordinates,
                                const std::vector<MixtureDistribution>& marginals);

struct DistanceReport {
  std::vector<double> marginal;  // one per coordinate
  double joint = 0.0;            // 0 when K == 1
};

/// Compares the empirical law of X_{1..n} with the predictive of X_{n+1}
/// given G_n, per coordinate and jointly.
DistanceReport empirical_vs_predictive_distance(const ProcessSpec& spec, const PathRecord& path,
                                                std::size_t n);

/// Predictive law of X_{n+1,i} given G_n reconstructed from the record.
MixtureDistribution predictive_at(const ProcessSpec& spec, const PathRecord& path, std::size_t n,
                                  std::size_t i);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double StandardError() const;
};
SampleSummary summarize(std::span<const double> values);
double sample_covariance(std::span<const double> a, std::span<const double> b);
double sample_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace pcid
