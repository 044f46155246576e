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
#include <span>
#include <vector>

#include "pcid/measures.hpp"
#include "pcid/process_spec.hpp"
#include "pcid/rng.hpp"

namespace pcid {

/// The random streams of one path. Observation and weight streams are per
/// coordinate; the remaining ones are shared by all coordinates.
struct PathStreams {
  PathStreams(std::uint64_t master_seed, std::uint64_t path_index, std::size_t coordinates);

  std::vector<RngStream> observation;
  std::vector<RngStream> weight;
  RngStream common;
  RngStream arrivals;
  RngStream latent;
};

/// Sufficient statistics of one coordinate of a randomly reinforced
/// predictive  (w0 nu + sum_k W_k delta_{x_k}) / (w0 + sum_k W_k).
///
/// Atoms are kept in insertion order together with prefix sums of their
/// weights, so a draw is one uniform plus a binary search. Running power sums
/// sum_k W_k x_k^p (p <= 4) give exact predictive moments in O(1).
///
/// When the total weight grows past 2^600 every weight is scaled by 2^-600.
/// The scaling is exact, so the normalized predictive is unchanged.
class ReinforcedCoordState {
 public:
  ReinforcedCoordState(BaseMeasure base, double base_weight);

  const BaseMeasure& base() const { return base_; }
  /// Current (possibly rescaled) base weight.
  double base_weight() const { return base_weight_; }
  double total_weight() const { return total_; }
  std::span<const double> atom_values() const { return values_; }
  std::span<const double> atom_weights() const { return weights_; }
  std::size_t atom_count() const { return values_.size(); }

  /// Appends atom (value, weight). A zero weight leaves the state unchanged.
  /// Throws ReinforcementError on a negative or non-finite weight.
  void Reinforce(double value, double weight);

  double Sample(RngStream& rng) const;
  /// E[X^k] under the current predictive, 0 <= k <= 4.
  double RawMoment(int k) const;
  double Mean() const { return RawMoment(1); }
  double Variance() const;
  /// Total weight recomputed from scratch (for invariant checks).
  double RecomputedTotal() const;

 private:
  void Rescale();

  BaseMeasure base_;
  std::array<double, 5> base_moments_{};
  double base_weight_;
  double total_;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> prefix_;  // prefix_[k] = sum_{j<=k} weights_[j]
  std::array<double, 5> power_sums_{};
};

/// The normalized mixture predictive of a reinforced coordinate.
MixtureDistribution reinforced_predictive(const ReinforcedCoordState& state);

/// Draws x_i from each coordinate's predictive (conditionally independent
/// across i), then draws W_{n,i} from the rule and reinforces.
/// `n` is the index of the observation being generated. Writes the draws and
/// the weights (zero for a skipped atom) into `x` and `w`.
void reinforced_step(std::span<ReinforcedCoordState> states, const CouplingRule& rule,
                     std::size_t n, PathStreams& streams, std::span<double> x,
                     std::span<double> w);

/// Two-coordinate step with A_{n,i} = beta_n x_j (j != i) and atom weight
/// W_{n,i} = total * A / (1 - A). Throws ReinforcementError when A == 1.
void uniform_coupled_step(std::span<ReinforcedCoordState> states, double beta_n,
                          PathStreams& streams, std::span<double> x, std::span<double> w);

/// Weight that realizes the mixing update  Q_n = A delta_x + (1 - A) Q_{n-1}
/// on a state with total weight `total`.
double weight_from_fraction(double total, double fraction);

struct GaussianCoordState {
  double mu;
  double sigma2;
};

/// Per-path state of the last-tick Gaussian model: one (mu, sigma2) per
/// coordinate and a shared arrival clock.
struct GaussianPathState {
  std::vector<GaussianCoordState> coords;
  double arrival_time;    // T_n
  double last_interval;   // t_{n-1}
};

/// mu <- (1 - lambda) mu + lambda x,  sigma2 <- (1 - lambda^2) sigma2.
void gaussian_update(GaussianCoordState& state, double x, double lambda);

/// Draws x_i ~ N(mu_i, sigma2_i), advances the clock by t_n and applies the
/// update with lambda_n = t_n / T_{n+1}. Returns lambda_n.
/// Throws std::invalid_argument if t_n <= 0.
double gaussian_last_tick_step(GaussianPathState& state, double t_n, PathStreams& streams,
                               std::span<double> x);

/// Arrival times T_1 < ... < T_horizon of a Poisson process.
std::vector<double> poisson_arrivals(double rate, std::size_t horizon, RngStream& rng);

struct StateSpaceCidState {
  std::vector<double> theta;  // theta_{n}, one per coordinate
  std::size_t n = 0;          // observations generated so far
};

/// theta_n = theta_{n-1} + N(0, b_n - b_{n-1});  x = theta_n + N(0, c - b_n).
void state_space_cid_step(StateSpaceCidState& state, const StateSpaceParams& params,
                          PathStreams& streams, std::span<double> x);

}  // namespace pcid
