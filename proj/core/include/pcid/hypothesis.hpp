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
#include <functional>
#include <span>

#include "pcid/rng.hpp"

namespace pcid {

double normal_cdf(double x);
double normal_quantile(double p);

/// P(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);
/// lambda with kolmogorov_survival(lambda) = alpha.
double kolmogorov_quantile(double alpha);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic null and Stephens'
/// small-sample correction.
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);
/// One-sample test against a continuous CDF.
TestResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);
/// Critical value of the two-sample statistic at level alpha.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

/// Energy-distance two-sample permutation test on row-major samples with
/// `dim` columns. Columns are standardized by the pooled standard deviation
/// before distances are taken. The p-value is (1 + #{T_perm >= T_obs}) /
/// (1 + permutations). Single-threaded and deterministic given `rng`.
TestResult energy_test(std::span<const double> a, std::span<const double> b, std::size_t dim,
                       std::size_t permutations, RngStream& rng);

}  // namespace pcid
