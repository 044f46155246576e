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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pcid/measures.hpp"
#include "pcid/process_spec.hpp"
#include "pcid/processes.hpp"
#include "pcid/rng.hpp"

namespace pcid {

/// Steps one path of a process forward, one observation vector at a time.
///
/// After n calls to Step() the simulator exposes X_n and the predictive law
/// of X_{n+1} given the history G_n. The object owns a copy of the spec and is
/// confined to one thread.
class PathSimulator {
 public:
  /// `spec` must already be validated.
  PathSimulator(ProcessSpec spec, std::uint64_t master_seed, std::uint64_t path_index);

  const ProcessSpec& spec() const { return spec_; }
  std::size_t coordinates() const { return k_; }
  std::size_t steps_taken() const { return n_; }

  /// Generates X_{n+1}; returns the K new observations.
  std::span<const double> Step();

  std::span<const double> last_x() const { return x_; }
  /// W_{n,i} of the last step (reinforced kinds; zero for a skipped atom).
  std::span<const double> last_weights() const { return w_; }
  /// lambda_n of the last step (Gaussian kind).
  double last_lambda() const { return lambda_; }
  /// Current arrival time T_{n+1} (Gaussian kind).
  double arrival_time() const;
  /// theta_n of coordinate i (state-space kind).
  double latent(std::size_t i) const;

  /// E[X_{n+1,i} | G_n].
  double PredictiveMean(std::size_t i) const { return PredictiveRawMoment(i, 1); }
  double PredictiveVariance(std::size_t i) const;
  /// E[X_{n+1,i}^k | G_n], 0 <= k <= 4.
  double PredictiveRawMoment(std::size_t i, int k) const;
  /// Full predictive law of X_{n+1,i}.
  MixtureDistribution Predictive(std::size_t i) const;

  /// Reinforced kinds only; nullptr otherwise.
  const ReinforcedCoordState* reinforced_state(std::size_t i) const;

 private:
  std::pair<double, double> NormalPredictive(std::size_t i) const;

  ProcessSpec spec_;
  std::size_t k_;
  std::size_t n_ = 0;
  PathStreams streams_;
  std::vector<double> x_;
  std::vector<double> w_;
  double lambda_ = 0.0;

  std::vector<ReinforcedCoordState> reinforced_;
  GaussianPathState gaussian_;
  StateSpaceCidState state_space_;
  std::vector<double> previous_x_;  // AR(1)
};

/// Which series a PathRecord keeps.
struct RecordOptions {
  bool observations = true;
  bool predictive = true;
  bool weights = true;
  bool arrivals = true;
  bool latent = true;

  static RecordOptions All() { return {}; }
  static RecordOptions ObservationsOnly() { return {true, false, false, false, false}; }
};

/// One simulated path. Matrices are row-major with one row per step and K
/// columns; row n-1 holds step n.
struct PathRecord {
  std::size_t coordinates = 0;
  std::size_t horizon = 0;
  /// X_{n,i}, horizon rows.
  std::vector<double> x;
  /// E[X_{n,i} | G_{n-1}] and Var[X_{n,i} | G_{n-1}], horizon + 1 rows. The
  /// last row is the predictive of the first unobserved step.
  std::vector<double> pred_mean;
  std::vector<double> pred_var;
  /// W_{n,i} (reinforced kinds), horizon rows.
  std::vector<double> weight;
  /// T_1, ..., T_{horizon+1} (Gaussian kind).
  std::vector<double> arrival;
  /// lambda_1, ..., lambda_horizon (Gaussian kind).
  std::vector<double> lambda;
  /// theta_{n,i} (state-space kind), horizon rows.
  std::vector<double> latent;

  double X(std::size_t n, std::size_t i) const { return x[(n - 1) * coordinates + i]; }
  double PredMean(std::size_t n, std::size_t i) const {
    return pred_mean[(n - 1) * coordinates + i];
  }
  double PredVar(std::size_t n, std::size_t i) const {
    return pred_var[(n - 1) * coordinates + i];
  }
};

struct Ensemble {
  ProcessSpec spec;
  std::size_t n_paths = 0;
  std::size_t horizon = 0;
  std::uint64_t master_seed = 0;
  std::vector<PathRecord> paths;
};

struct EnsembleOptions {
  /// 0 means one worker per hardware thread.
  unsigned threads = 0;
  RecordOptions record;
};

PathRecord simulate_path(const ProcessSpec& spec, std::uint64_t master_seed,
                         std::uint64_t path_index, std::size_t horizon,
                         const RecordOptions& record = {});

/// Validates `spec` (throws SpecError) and simulates n_paths >= 1 paths.
/// The result does not depend on `options.threads`.
Ensemble run_ensemble(const ProcessSpec& spec, std::size_t n_paths, std::size_t horizon,
                      std::uint64_t master_seed, const EnsembleOptions& options = {});

/// Recomputes the predictive mean and variance rows of `record` from its
/// observations and auxiliary variables alone. Equal to the recorded rows
/// bit for bit when the engine never looks ahead.
std::pair<std::vector<double>, std::vector<double>> replay_predictive(
    const ProcessSpec& spec, const PathRecord& record);

unsigned resolve_threads(unsigned requested);

/// Evaluates fn(path_index) for every index in [0, n) on `threads` workers and
/// returns the results in index order. If several calls throw, the exception
/// of the lowest index is rethrown.
template <class Fn>
auto map_paths(std::size_t n, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1, std::memory_order_relaxed);
      if (idx >= n) return;
      try {
        slots[idx].emplace(fn(idx));
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace pcid
