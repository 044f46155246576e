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
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcid/process_spec.hpp"
#include "pcid/statistics.hpp"

namespace pcid {

/// One pass/fail comparison inside a verdict.
struct SubCheck {
  std::string name;
  double statistic = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

/// A named verdict. `statistic`, `reference` and `tolerance` mirror the
/// first sub-check; `pass` holds iff every non-skipped sub-check passes.
struct TestVerdict {
  std::string name;
  std::string reference_name;
  double statistic = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  double alpha = 0.01;
  bool pass = false;
  std::size_t n_paths = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::vector<SubCheck> checks;
};

nlohmann::json verdict_to_json(const TestVerdict& verdict);

struct VerifierOptions {
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
  double alpha = 0.01;
  /// 0 means one worker per hardware thread. Never affects results.
  unsigned threads = 0;
};

/// Energy-distance permutation test of
///   (X_{1:n}, X_{n+1}^{-j}, X_{n+1,j})  =d  (X_{1:n}, X_{n+1}^{-j}, X_{n+2,j}).
/// The two sides are taken from disjoint halves of the paths so the samples
/// are independent. Throws VerifierError if K < 2.
TestVerdict check_pcid(const ProcessSpec& spec, std::size_t n, std::size_t j,
                       const VerifierOptions& options, std::size_t permutations = 199);

/// Two-sample KS of X_{n,i} against X_{1,i} (disjoint path halves) for every
/// coordinate and each step in `steps`, Bonferroni-corrected.
TestVerdict check_marginal_identity(const ProcessSpec& spec, std::vector<std::size_t> steps,
                                    const VerifierOptions& options);

/// Bounded stopping rule. kConstant stops at `n`; kFirstExceed stops at the
/// first n with X_{n,coordinate} > threshold, or at `cap`.
struct StoppingRule {
  enum class Kind { kConstant, kFirstExceed };
  Kind kind = Kind::kConstant;
  std::size_t n = 1;
  std::size_t coordinate = 0;
  double threshold = 0.0;
  std::size_t cap = 1;

  std::size_t Bound() const { return kind == Kind::kConstant ? n : cap; }
};

/// Two-sample KS of X_{tau+1,i} against X_{1,i} for every coordinate.
TestVerdict check_stopping_time(const ProcessSpec& spec, const StoppingRule& tau,
                                const VerifierOptions& options);

/// Mixture-normal limit of S_n: KS of S_{n,i}/sigma_hat_i against N(0,1),
/// Var(S_{n,i}) within 5% of mean sigma_hat_i^2, and cross-coordinate
/// correlations within 4/sqrt(n_paths) of zero. Refuses n < 1000.
TestVerdict check_clt_forecast_errors(const ProcessSpec& spec, std::size_t n,
                                      const VerifierOptions& options);

/// Limit of Stilde_n against the spec's closed-form covariance. Supported:
/// polya and reinforced with common or independent weights, uniform_coupled
/// with harmonic beta, iid. Throws VerifierError("no reference form")
/// otherwise.
TestVerdict check_clt_sample_mean(const ProcessSpec& spec, std::size_t n,
                                  const VerifierOptions& options);

/// Last-tick Gaussian model at `horizon` >= 1000: mean and variance of
/// gamma_hat (Poisson arrivals only), Var of the terminal means, and the
/// correlation of squared terminal means across coordinates.
TestVerdict check_gaussian_limit(const ProcessSpec& spec, std::size_t horizon,
                                 const VerifierOptions& options);

/// Running average of f(X_k) against the same functional of the terminal
/// predictive means; passes when at least 95% of paths are within
/// `tolerance`. Supports kIdentity and kProductOfCoords.
TestVerdict check_slln(const ProcessSpec& spec, SllnFunctional functional, std::size_t n,
                       double tolerance, const VerifierOptions& options);

/// Marginal and joint rectangle distances between the empirical law of
/// X_{1..n} and the predictive at n; passes when at least 95% of paths are
/// below `tolerance` for every distance.
TestVerdict check_predictive_agreement(const ProcessSpec& spec, std::size_t n, double tolerance,
                                       const VerifierOptions& options);

/// Sorted verifier names.
std::vector<std::string> verifier_names();

}  // namespace pcid
