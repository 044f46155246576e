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

#include <array>
#include <cstddef>

#include "pcid/measures.hpp"

namespace pcid {

// Reference values computed without the simulation engine or its RNG.

struct CorrelationOracle {
  double covariance = 0.0;
  double correlation = 0.0;
};

/// Cov and Corr of (X_{2,1}, X_{2,2}) in the two-coordinate uniform scheme
/// with beta_1 = 1, by tensor composite Simpson quadrature over the two
/// first-step draws. With `coupled` false the fractions are forced to zero.
CorrelationOracle corr_uniform_step2(bool coupled = true, std::size_t panels = 10000);

/// prod_{k=1}^{n} (1 - 2/((k+1)(k+2))), evaluated factor by factor.
double gamma_partial_product(std::size_t n);
/// Telescoped form (n+3) / (3(n+1)).
double gamma_partial_product_closed(std::size_t n);
/// lim E[gamma_n] = 1/3.
double gamma_mean_limit();
/// Exact Var[prod_{k<=n} (1 - lambda_k^2)] for independent lambda_k ~ Beta(1, k).
double gamma_partial_variance(std::size_t n);
/// (4/45) lim prod_{k=2}^{n} (1 - 2/((k+1)(k+2)))^2 = 1/45.
double gamma_variance_lower_bound();

struct WeightMoments {
  double mean = 0.0;
  double variance = 0.0;
  double second_moment = 0.0;
  double inv_square_moment = 0.0;  // E[1/W^2]
};
WeightMoments weight_moments(const WeightDistribution& w);

/// sigma2_alpha * V[W] / E[W]^2. Throws std::domain_error when E[1/W^2] is
/// not finite or E[W] <= 0.
double rru_clt_variance(const WeightMoments& moments, double sigma2_alpha);

struct PolyaLimitMoments {
  double mean = 0.0;
  double variance = 0.0;
  bool degenerate = false;
};
/// Moments of alpha((a, b]) for a Dirichlet process with total mass w0 and
/// centring measure nu.
PolyaLimitMoments polya_limit_moments(double w0, const BaseMeasure& nu, double a, double b);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// 4 [ int (x-mu_1)^2 (x-1/2)^2 da_1 , s_1 s_2 ; s_1 s_2 , int (x-mu_2)^2 (x-1/2)^2 da_2 ]
/// where s_i is the variance of alpha_i.
Matrix2 tilde_sigma_uniform(const MixtureDistribution& alpha1, const MixtureDistribution& alpha2);
/// The same from raw moments E[X^0..X^4] of each measure.
Matrix2 tilde_sigma_uniform(const std::array<double, 5>& raw1, const std::array<double, 5>& raw2);

/// Diagonal of the uniform-scheme limit obtained by expanding
/// V_{k,i} = U_{k,i} (1 - k beta_k X_{k,j}):  4 s_i int (y-1/2)^2 da_j.
std::array<double, 2> tilde_sigma_uniform_cross_diagonal(const std::array<double, 5>& raw1,
                                                         const std::array<double, 5>& raw2);

}  // namespace pcid
