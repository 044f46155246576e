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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pcid/engine.hpp"
#include "pcid/errors.hpp"
#include "pcid/process_spec.hpp"

namespace pcid {
namespace {

std::vector<ProcessSpec> AllKinds() {
  StateSpaceParams ss;
  ss.coordinates = 2;
  Ar1Params ar;
  return {ProcessSpec::Polya(2, BaseMeasure::Uniform(0.0, 1.0)),
          ProcessSpec::Reinforced({BaseMeasure::Uniform(0.0, 1.0), BaseMeasure::Normal(0.0, 1.0)},
                                  {1.0, 2.0},
                                  CouplingRule::Independent(WeightDistribution(UniformWeight{0.5, 1.5}))),
          ProcessSpec::UniformCoupled(BetaSchedule::Harmonic()),
          ProcessSpec::GaussianLastTick({0.0, 1.0}, {1.0, 2.0}),
          ProcessSpec::StateSpaceCid(ss),
          ProcessSpec::Iid({BaseMeasure::Normal(0.0, 1.0)}),
          ProcessSpec::Ar1Drift(ar)};
}

bool SameRecord(const PathRecord& a, const PathRecord& b) {
  return a.x == b.x && a.pred_mean == b.pred_mean && a.pred_var == b.pred_var &&
         a.weight == b.weight && a.arrival == b.arrival && a.lambda == b.lambda &&
         a.latent == b.latent;
}

TEST(Engine, EnsembleIndependentOfThreadCount) {
  for (const auto& spec : AllKinds()) {
    const auto one = run_ensemble(spec, 9, 30, 77, {1, RecordOptions::All()});
    const auto many = run_ensemble(spec, 9, 30, 77, {4, RecordOptions::All()});
    ASSERT_EQ(one.paths.size(), many.paths.size());
    for (std::size_t p = 0; p < one.paths.size(); ++p) {
      EXPECT_TRUE(SameRecord(one.paths[p], many.paths[p])) << to_string(spec.kind) << " path " << p;
    }
  }
}

TEST(Engine, PathDependsOnlyOnSeedAndIndex) {
  const auto spec = ProcessSpec::Polya(2, BaseMeasure::Uniform(0.0, 1.0));
  const auto ens = run_ensemble(spec, 5, 20, 3);
  const auto alone = simulate_path(spec, 3, 4, 20);
  EXPECT_TRUE(SameRecord(ens.paths[4], alone));
  const auto other = simulate_path(spec, 4, 4, 20);
  EXPECT_NE(alone.x, other.x);
}

TEST(Engine, RecordShapes) {
  const auto spec = ProcessSpec::GaussianLastTick({0.0, 1.0}, {1.0, 2.0});
  const auto r = simulate_path(spec, 1, 0, 12);
  EXPECT_EQ(r.x.size(), 24u);
  EXPECT_EQ(r.pred_mean.size(), 26u);
  EXPECT_EQ(r.arrival.size(), 13u);
  EXPECT_EQ(r.lambda.size(), 12u);
}

TEST(Engine, NoLookAhead) {
  for (const auto& spec : AllKinds()) {
    const auto r = simulate_path(spec, 5, 2, 40);
    const auto [mean, var] = replay_predictive(spec, r);
    EXPECT_EQ(mean, r.pred_mean) << to_string(spec.kind);
    EXPECT_EQ(var, r.pred_var) << to_string(spec.kind);
  }
}

TEST(Engine, GaussianVarianceProductIdentity) {
  const auto spec = ProcessSpec::GaussianLastTick({0.0, 1.0}, {1.0, 2.0});
  for (std::uint64_t p = 0; p < 20; ++p) {
    PathSimulator sim(spec, 9, p);
    double gamma = 1.0;
    for (int n = 0; n < 500; ++n) {
      sim.Step();
      gamma *= 1.0 - sim.last_lambda() * sim.last_lambda();
    }
    EXPECT_NEAR(sim.PredictiveVariance(0) / 1.0, gamma, 1e-10);
    EXPECT_NEAR(sim.PredictiveVariance(1) / 2.0, gamma, 1e-10);
  }
}

TEST(Engine, GaussianLambdaIsIntervalOverArrival) {
  const auto spec = ProcessSpec::GaussianLastTick({0.0}, {1.0}, {}, 2.0);
  const auto r = simulate_path(spec, 2, 0, 10);
  EXPECT_DOUBLE_EQ(r.arrival[0], 2.0);
  for (std::size_t n = 1; n <= 10; ++n) {
    const double t = r.arrival[n] - r.arrival[n - 1];
    EXPECT_NEAR(r.lambda[n - 1], t / r.arrival[n], 1e-15);
  }
}

TEST(Engine, StateSpacePredictiveIsLatentMean) {
  StateSpaceParams p;
  const auto spec = ProcessSpec::StateSpaceCid(p);
  const auto r = simulate_path(spec, 4, 1, 15);
  for (std::size_t n = 1; n <= 15; ++n) {
    EXPECT_DOUBLE_EQ(r.PredMean(n + 1, 0), r.latent[n - 1]);
    EXPECT_NEAR(r.PredVar(n + 1, 0), p.c - p.BAt(n), 1e-15);
  }
}

TEST(Engine, PolyaWeightsAreOne) {
  const auto r = simulate_path(ProcessSpec::Polya(3, BaseMeasure::Normal(0.0, 1.0)), 1, 0, 25);
  for (double w : r.weight) EXPECT_EQ(w, 1.0);
}

TEST(Engine, RejectsBadSizes) {
  const auto spec = ProcessSpec::Polya(1, BaseMeasure::Uniform(0.0, 1.0));
  EXPECT_THROW(run_ensemble(spec, 0, 10, 1), std::invalid_argument);
  EXPECT_THROW(run_ensemble(spec, 10, 0, 1), std::invalid_argument);
}

TEST(Engine, InvalidSpecRejected) {
  auto spec = ProcessSpec::Polya(2, BaseMeasure::Uniform(0.0, 1.0), -1.0);
  EXPECT_THROW(run_ensemble(spec, 2, 2, 1), SpecError);
}

TEST(MapPaths, RethrowsLowestIndexError) {
  try {
    map_paths(10, 3, [](std::size_t i) -> int {
      if (i == 3 || i == 7) throw std::runtime_error("path " + std::to_string(i));
      return 0;
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "path 3");
  }
}

}  // namespace
}  // namespace pcid
