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

#include "pcid/engine.hpp"

#include <cmath>

#include "pcid/errors.hpp"

namespace pcid {
namespace {

double NormalRawMoment(double m, double v, int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return m;
    case 2: return m * m + v;
    case 3: return m * m * m + 3.0 * m * v;
    case 4: return m * m * m * m + 6.0 * m * m * v + 3.0 * v * v;
    default: throw std::invalid_argument("moment order must be in [0, 4]");
  }
}

bool IsReinforced(ProcessKind kind) {
  return kind == ProcessKind::kPolya || kind == ProcessKind::kReinforced ||
         kind == ProcessKind::kUniformCoupled;
}

double NextInterval(const ArrivalProcess& arrivals, RngStream& rng) {
  return arrivals.kind == ArrivalProcess::Kind::kPoisson ? rng.Exponential(arrivals.rate)
                                                         : arrivals.interval;
}

}  // namespace

PathSimulator::PathSimulator(ProcessSpec spec, std::uint64_t master_seed,
                             std::uint64_t path_index)
    : spec_(std::move(spec)),
      k_(spec_.coordinates()),
      streams_(master_seed, path_index, k_),
      x_(k_, 0.0),
      w_(k_, 0.0) {
  switch (spec_.kind) {
    case ProcessKind::kPolya:
    case ProcessKind::kReinforced:
    case ProcessKind::kUniformCoupled: {
      const auto& p = std::get<ReinforcedParams>(spec_.params);
      reinforced_.reserve(k_);
      for (std::size_t i = 0; i < k_; ++i) reinforced_.emplace_back(p.base[i], p.base_weight[i]);
      break;
    }
    case ProcessKind::kGaussianLastTick: {
      const auto& p = std::get<GaussianParams>(spec_.params);
      for (std::size_t i = 0; i < k_; ++i) gaussian_.coords.push_back({p.mu1[i], p.sigma2_1[i]});
      gaussian_.last_interval = p.t0 ? *p.t0 : NextInterval(p.arrivals, streams_.arrivals);
      gaussian_.arrival_time = gaussian_.last_interval;
      break;
    }
    case ProcessKind::kStateSpaceCid: {
      const auto& p = std::get<StateSpaceParams>(spec_.params);
      state_space_.theta.assign(k_, p.theta0);
      break;
    }
    case ProcessKind::kAr1Drift:
      previous_x_.assign(k_, std::get<Ar1Params>(spec_.params).x0);
      break;
    case ProcessKind::kIid: break;
  }
}

std::span<const double> PathSimulator::Step() {
  const std::size_t n = n_ + 1;
  switch (spec_.kind) {
    case ProcessKind::kPolya:
    case ProcessKind::kReinforced:
    case ProcessKind::kUniformCoupled:
      reinforced_step(reinforced_, std::get<ReinforcedParams>(spec_.params).rule, n, streams_,
                      x_, w_);
      break;
    case ProcessKind::kGaussianLastTick: {
      const auto& p = std::get<GaussianParams>(spec_.params);
      const double t = NextInterval(p.arrivals, streams_.arrivals);
      lambda_ = gaussian_last_tick_step(gaussian_, t, streams_, x_);
      break;
    }
    case ProcessKind::kStateSpaceCid:
      state_space_cid_step(state_space_, std::get<StateSpaceParams>(spec_.params), streams_, x_);
      break;
    case ProcessKind::kIid: {
      const auto& p = std::get<IidParams>(spec_.params);
      for (std::size_t i = 0; i < k_; ++i) x_[i] = p.base[i].Sample(streams_.observation[i]);
      break;
    }
    case ProcessKind::kAr1Drift: {
      const auto& p = std::get<Ar1Params>(spec_.params);
      const double sd = std::sqrt(p.noise_variance);
      for (std::size_t i = 0; i < k_; ++i) {
        x_[i] = p.phi * previous_x_[i] + p.drift + sd * streams_.observation[i].Normal();
        previous_x_[i] = x_[i];
      }
      break;
    }
  }
  n_ = n;
  return x_;
}

double PathSimulator::arrival_time() const { return gaussian_.arrival_time; }

double PathSimulator::latent(std::size_t i) const {
  return state_space_.theta.empty() ? 0.0 : state_space_.theta[i];
}

std::pair<double, double> PathSimulator::NormalPredictive(std::size_t i) const {
  switch (spec_.kind) {
    case ProcessKind::kGaussianLastTick:
      return {gaussian_.coords[i].mu, gaussian_.coords[i].sigma2};
    case ProcessKind::kStateSpaceCid: {
      const auto& p = std::get<StateSpaceParams>(spec_.params);
      return {state_space_.theta[i], p.c - p.BAt(n_)};
    }
    case ProcessKind::kAr1Drift: {
      const auto& p = std::get<Ar1Params>(spec_.params);
      return {p.phi * previous_x_[i] + p.drift, p.noise_variance};
    }
    default: throw std::logic_error("not a Gaussian-predictive kind");
  }
}

double PathSimulator::PredictiveRawMoment(std::size_t i, int k) const {
  if (IsReinforced(spec_.kind)) return reinforced_[i].RawMoment(k);
  if (spec_.kind == ProcessKind::kIid) return std::get<IidParams>(spec_.params).base[i].RawMoment(k);
  const auto [m, v] = NormalPredictive(i);
  return NormalRawMoment(m, v, k);
}

double PathSimulator::PredictiveVariance(std::size_t i) const {
  if (IsReinforced(spec_.kind)) return reinforced_[i].Variance();
  if (spec_.kind == ProcessKind::kIid) return std::get<IidParams>(spec_.params).base[i].Variance();
  return NormalPredictive(i).second;
}

MixtureDistribution PathSimulator::Predictive(std::size_t i) const {
  if (IsReinforced(spec_.kind)) return reinforced_predictive(reinforced_[i]);
  if (spec_.kind == ProcessKind::kIid) {
    return MixtureDistribution(std::get<IidParams>(spec_.params).base[i]);
  }
  const auto [m, v] = NormalPredictive(i);
  return MixtureDistribution(BaseMeasure::Normal(m, v));
}

const ReinforcedCoordState* PathSimulator::reinforced_state(std::size_t i) const {
  return reinforced_.empty() ? nullptr : &reinforced_[i];
}

PathRecord simulate_path(const ProcessSpec& spec, std::uint64_t master_seed,
                         std::uint64_t path_index, std::size_t horizon,
                         const RecordOptions& record) {
  PathSimulator sim(spec, master_seed, path_index);
  const std::size_t k = sim.coordinates();
  PathRecord out;
  out.coordinates = k;
  out.horizon = horizon;
  const bool reinforced = IsReinforced(spec.kind);
  const bool gaussian = spec.kind == ProcessKind::kGaussianLastTick;
  const bool latent = spec.kind == ProcessKind::kStateSpaceCid;
  if (record.observations) out.x.reserve(horizon * k);
  if (record.predictive) {
    out.pred_mean.reserve((horizon + 1) * k);
    out.pred_var.reserve((horizon + 1) * k);
  }
  if (record.weights && reinforced) out.weight.reserve(horizon * k);
  if (record.arrivals && gaussian) {
    out.arrival.reserve(horizon + 1);
    out.lambda.reserve(horizon);
    out.arrival.push_back(sim.arrival_time());
  }
  if (record.latent && latent) out.latent.reserve(horizon * k);

  auto push_predictive = [&] {
    if (!record.predictive) return;
    for (std::size_t i = 0; i < k; ++i) {
      out.pred_mean.push_back(sim.PredictiveMean(i));
      out.pred_var.push_back(sim.PredictiveVariance(i));
    }
  };
  push_predictive();
  for (std::size_t n = 1; n <= horizon; ++n) {
    const auto x = sim.Step();
    if (record.observations) out.x.insert(out.x.end(), x.begin(), x.end());
    if (record.weights && reinforced) {
      const auto w = sim.last_weights();
      out.weight.insert(out.weight.end(), w.begin(), w.end());
    }
    if (record.arrivals && gaussian) {
      out.arrival.push_back(sim.arrival_time());
      out.lambda.push_back(sim.last_lambda());
    }
    if (record.latent && latent) {
      for (std::size_t i = 0; i < k; ++i) out.latent.push_back(sim.latent(i));
    }
    push_predictive();
  }
  return out;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

Ensemble run_ensemble(const ProcessSpec& spec, std::size_t n_paths, std::size_t horizon,
                      std::uint64_t master_seed, const EnsembleOptions& options) {
  validate(spec);
  if (n_paths < 1) throw std::invalid_argument("run_ensemble: n_paths must be >= 1");
  if (horizon < 1) throw std::invalid_argument("run_ensemble: horizon must be >= 1");
  Ensemble out{spec, n_paths, horizon, master_seed, {}};
  out.paths = map_paths(n_paths, options.threads, [&](std::size_t p) {
    return simulate_path(spec, master_seed, p, horizon, options.record);
  });
  return out;
}

std::pair<std::vector<double>, std::vector<double>> replay_predictive(
    const ProcessSpec& spec, const PathRecord& record) {
  const std::size_t k = record.coordinates;
  const std::size_t horizon = record.horizon;
  if (record.x.size() != horizon * k) {
    throw std::invalid_argument("replay_predictive: observations were not recorded");
  }
  std::vector<double> mean, var;
  mean.reserve((horizon + 1) * k);
  var.reserve((horizon + 1) * k);

  switch (spec.kind) {
    case ProcessKind::kPolya:
    case ProcessKind::kReinforced:
    case ProcessKind::kUniformCoupled: {
      if (record.weight.size() != horizon * k) {
        throw std::invalid_argument("replay_predictive: weights were not recorded");
      }
      const auto& p = std::get<ReinforcedParams>(spec.params);
      std::vector<ReinforcedCoordState> states;
      for (std::size_t i = 0; i < k; ++i) states.emplace_back(p.base[i], p.base_weight[i]);
      for (std::size_t n = 0; n <= horizon; ++n) {
        if (n > 0) {
          for (std::size_t i = 0; i < k; ++i) {
            states[i].Reinforce(record.X(n, i), record.weight[(n - 1) * k + i]);
          }
        }
        for (std::size_t i = 0; i < k; ++i) {
          mean.push_back(states[i].Mean());
          var.push_back(states[i].Variance());
        }
      }
      break;
    }
    case ProcessKind::kGaussianLastTick: {
      if (record.lambda.size() != horizon) {
        throw std::invalid_argument("replay_predictive: arrivals were not recorded");
      }
      const auto& p = std::get<GaussianParams>(spec.params);
      std::vector<GaussianCoordState> coords;
      for (std::size_t i = 0; i < k; ++i) coords.push_back({p.mu1[i], p.sigma2_1[i]});
      for (std::size_t n = 0; n <= horizon; ++n) {
        if (n > 0) {
          for (std::size_t i = 0; i < k; ++i) {
            gaussian_update(coords[i], record.X(n, i), record.lambda[n - 1]);
          }
        }
        for (std::size_t i = 0; i < k; ++i) {
          mean.push_back(coords[i].mu);
          var.push_back(coords[i].sigma2);
        }
      }
      break;
    }
    case ProcessKind::kStateSpaceCid: {
      if (record.latent.size() != horizon * k) {
        throw std::invalid_argument("replay_predictive: latent states were not recorded");
      }
      const auto& p = std::get<StateSpaceParams>(spec.params);
      for (std::size_t n = 0; n <= horizon; ++n) {
        for (std::size_t i = 0; i < k; ++i) {
          mean.push_back(n == 0 ? p.theta0 : record.latent[(n - 1) * k + i]);
          var.push_back(p.c - p.BAt(n));
        }
      }
      break;
    }
    case ProcessKind::kIid: {
      const auto& p = std::get<IidParams>(spec.params);
      for (std::size_t n = 0; n <= horizon; ++n) {
        for (std::size_t i = 0; i < k; ++i) {
          mean.push_back(p.base[i].Mean());
          var.push_back(p.base[i].Variance());
        }
      }
      break;
    }
    case ProcessKind::kAr1Drift: {
      const auto& p = std::get<Ar1Params>(spec.params);
      for (std::size_t n = 0; n <= horizon; ++n) {
        for (std::size_t i = 0; i < k; ++i) {
          const double prev = n == 0 ? p.x0 : record.X(n, i);
          mean.push_back(p.phi * prev + p.drift);
          var.push_back(p.noise_variance);
        }
      }
      break;
    }
  }
  return {std::move(mean), std::move(var)};
}

}  // namespace pcid
