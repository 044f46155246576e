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

#include "pcid/processes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcid/errors.hpp"

namespace pcid {
namespace {

constexpr int kRescaleExponent = 600;
const double kRescaleThreshold = std::ldexp(1.0, kRescaleExponent);

}  // namespace

PathStreams::PathStreams(std::uint64_t master_seed, std::uint64_t path_index,
                         std::size_t coordinates)
    : common(master_seed, path_index, substream::kCommon),
      arrivals(master_seed, path_index, substream::kArrivals),
      latent(master_seed, path_index, substream::kLatent) {
  observation.reserve(coordinates);
  weight.reserve(coordinates);
  for (std::size_t i = 0; i < coordinates; ++i) {
    observation.emplace_back(master_seed, path_index, substream::kObservationBase + i);
    weight.emplace_back(master_seed, path_index, substream::kWeightBase + i);
  }
}

ReinforcedCoordState::ReinforcedCoordState(BaseMeasure base, double base_weight)
    : base_(std::move(base)), base_weight_(base_weight), total_(base_weight) {
  if (!(base_weight > 0.0) || !std::isfinite(base_weight)) {
    throw ReinforcementError("base weight must be finite and > 0");
  }
  for (int k = 0; k <= 4; ++k) base_moments_[k] = base_.RawMoment(k);
}

void ReinforcedCoordState::Reinforce(double value, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw ReinforcementError("reinforcement weight must be finite and >= 0, got " +
                             std::to_string(weight));
  }
  if (weight == 0.0) return;
  values_.push_back(value);
  weights_.push_back(weight);
  const double prev = prefix_.empty() ? 0.0 : prefix_.back();
  prefix_.push_back(prev + weight);
  total_ += weight;
  double power = weight;
  for (int k = 1; k <= 4; ++k) {
    power *= value;
    power_sums_[k] += power;
  }
  power_sums_[0] += weight;
  if (total_ > kRescaleThreshold) Rescale();
}

void ReinforcedCoordState::Rescale() {
  auto scale = [](double& v) { v = std::ldexp(v, -kRescaleExponent); };
  scale(base_weight_);
  scale(total_);
  for (double& v : weights_) scale(v);
  for (double& v : prefix_) scale(v);
  for (double& v : power_sums_) scale(v);
}

double ReinforcedCoordState::Sample(RngStream& rng) const {
  const double u = rng.Uniform() * total_;
  if (u < base_weight_ || prefix_.empty()) return base_.Sample(rng);
  const double r = u - base_weight_;
  auto it = std::upper_bound(prefix_.begin(), prefix_.end(), r);
  if (it == prefix_.end()) --it;
  return values_[static_cast<std::size_t>(it - prefix_.begin())];
}

double ReinforcedCoordState::RawMoment(int k) const {
  if (k < 0 || k > 4) throw std::invalid_argument("moment order must be in [0, 4]");
  return (base_weight_ * base_moments_[k] + power_sums_[k]) / total_;
}

double ReinforcedCoordState::Variance() const {
  const double m = Mean();
  return std::max(0.0, RawMoment(2) - m * m);
}

double ReinforcedCoordState::RecomputedTotal() const {
  double sum = base_weight_;
  for (double w : weights_) sum += w;
  return sum;
}

MixtureDistribution reinforced_predictive(const ReinforcedCoordState& state) {
  std::vector<Atom> atoms;
  atoms.reserve(state.atom_count());
  for (std::size_t k = 0; k < state.atom_count(); ++k) {
    atoms.push_back({state.atom_values()[k], state.atom_weights()[k]});
  }
  return MixtureDistribution(state.base(), state.base_weight(), std::move(atoms));
}

double weight_from_fraction(double total, double fraction) {
  if (!(fraction >= 0.0) || !(fraction <= 1.0)) {
    throw ReinforcementError("mixing fraction must lie in [0, 1]");
  }
  if (fraction == 1.0) throw ReinforcementError("degenerate reinforcement: A = 1");
  return total * fraction / (1.0 - fraction);
}

void reinforced_step(std::span<ReinforcedCoordState> states, const CouplingRule& rule,
                     std::size_t n, PathStreams& streams, std::span<double> x,
                     std::span<double> w) {
  const std::size_t k = states.size();
  if (rule.kind == CouplingRule::Kind::kCrossFraction) {
    uniform_coupled_step(states, rule.beta.At(n), streams, x, w);
    return;
  }
  for (std::size_t i = 0; i < k; ++i) x[i] = states[i].Sample(streams.observation[i]);
  switch (rule.kind) {
    case CouplingRule::Kind::kCommonWeight: {
      const double shared = rule.weight.Sample(streams.common);
      for (std::size_t i = 0; i < k; ++i) w[i] = shared;
      break;
    }
    case CouplingRule::Kind::kIndependentIidWeights:
      for (std::size_t i = 0; i < k; ++i) w[i] = rule.weight.Sample(streams.weight[i]);
      break;
    case CouplingRule::Kind::kSelfWeighted:
      for (std::size_t i = 0; i < k; ++i) w[i] = x[i] + rule.self_offset;
      break;
    case CouplingRule::Kind::kCrossFraction: break;
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!(w[i] > 0.0)) {
      throw ReinforcementError("coupling rule produced a non-positive weight at step " +
                               std::to_string(n));
    }
    states[i].Reinforce(x[i], w[i]);
  }
}

void uniform_coupled_step(std::span<ReinforcedCoordState> states, double beta_n,
                          PathStreams& streams, std::span<double> x, std::span<double> w) {
  if (states.size() != 2) throw std::invalid_argument("uniform_coupled_step needs K = 2");
  x[0] = states[0].Sample(streams.observation[0]);
  x[1] = states[1].Sample(streams.observation[1]);
  w[0] = weight_from_fraction(states[0].total_weight(), beta_n * x[1]);
  w[1] = weight_from_fraction(states[1].total_weight(), beta_n * x[0]);
  states[0].Reinforce(x[0], w[0]);
  states[1].Reinforce(x[1], w[1]);
}

void gaussian_update(GaussianCoordState& state, double x, double lambda) {
  state.mu = (1.0 - lambda) * state.mu + lambda * x;
  state.sigma2 = (1.0 - lambda * lambda) * state.sigma2;
}

double gaussian_last_tick_step(GaussianPathState& state, double t_n, PathStreams& streams,
                               std::span<double> x) {
  if (!(t_n > 0.0)) throw std::invalid_argument("inter-arrival time must be > 0");
  for (std::size_t i = 0; i < state.coords.size(); ++i) {
    x[i] = streams.observation[i].Normal(state.coords[i].mu, std::sqrt(state.coords[i].sigma2));
  }
  state.arrival_time += t_n;
  state.last_interval = t_n;
  const double lambda = t_n / state.arrival_time;
  for (std::size_t i = 0; i < state.coords.size(); ++i) gaussian_update(state.coords[i], x[i], lambda);
  return lambda;
}

std::vector<double> poisson_arrivals(double rate, std::size_t horizon, RngStream& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("Poisson rate must be > 0");
  std::vector<double> times(horizon);
  double t = 0.0;
  for (std::size_t k = 0; k < horizon; ++k) {
    t += rng.Exponential(rate);
    times[k] = t;
  }
  return times;
}

void state_space_cid_step(StateSpaceCidState& state, const StateSpaceParams& params,
                          PathStreams& streams, std::span<double> x) {
  const std::size_t n = state.n + 1;
  const double b_prev = params.BAt(n - 1);
  const double b_now = params.BAt(n);
  const double drift_sd = std::sqrt(std::max(0.0, b_now - b_prev));
  const double noise_sd = std::sqrt(params.c - b_now);
  for (std::size_t i = 0; i < state.theta.size(); ++i) {
    if (drift_sd > 0.0) state.theta[i] += drift_sd * streams.latent.Normal();
    x[i] = state.theta[i] + noise_sd * streams.observation[i].Normal();
  }
  state.n = n;
}

}  // namespace pcid
