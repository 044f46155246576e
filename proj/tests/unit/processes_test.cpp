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
#include <random>
#include <vector>

#include "pcid/errors.hpp"
#include "pcid/measures.hpp"
#include "pcid/processes.hpp"

namespace pcid {
namespace {

TEST(BaseMeasure, UniformMoments) {
  const auto u = BaseMeasure::Uniform(0.0, 1.0);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(u.RawMoment(k), 1.0 / (k + 1), 1e-15);
  EXPECT_NEAR(u.Variance(), 1.0 / 12.0, 1e-15);
  EXPECT_DOUBLE_EQ(u.Cdf(0.25), 0.25);
}

TEST(BaseMeasure, NormalMoments) {
  const auto n = BaseMeasure::Normal(1.0, 4.0);
  EXPECT_DOUBLE_EQ(n.RawMoment(1), 1.0);
  EXPECT_DOUBLE_EQ(n.RawMoment(2), 5.0);
  // E[X^4] = mu^4 + 6 mu^2 s^2 + 3 s^4.
  EXPECT_DOUBLE_EQ(n.RawMoment(4), 1.0 + 24.0 + 48.0);
  EXPECT_NEAR(n.Cdf(1.0), 0.5, 1e-15);
}

TEST(BaseMeasure, DiscreteJumps) {
  const auto d = BaseMeasure::Discrete({0.0, 2.0}, {0.25, 0.75});
  EXPECT_DOUBLE_EQ(d.Mean(), 1.5);
  EXPECT_DOUBLE_EQ(d.Cdf(0.0), 0.25);
  EXPECT_DOUBLE_EQ(d.CdfLeft(0.0), 0.0);
  EXPECT_DOUBLE_EQ(d.Cdf(1.0), 0.25);
  EXPECT_EQ(d.Jumps().size(), 2u);
}

TEST(MixtureDistribution, NormalizationProperty) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> value(-3.0, 3.0), weight(1e-6, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Atom> atoms;
    const int n = 1 + trial % 40;
    for (int k = 0; k < n; ++k) atoms.push_back({value(gen), weight(gen)});
    const MixtureDistribution m(BaseMeasure::Normal(0.0, 1.0), weight(gen), atoms);
    EXPECT_NEAR(m.TotalProbability(), 1.0, 1e-12);
    EXPECT_NEAR(m.RawMoment(0), 1.0, 1e-12);
    EXPECT_NEAR(m.Cdf(1e300), 1.0, 1e-12);
  }
}

TEST(MixtureDistribution, PolyaPredictiveByHand) {
  // w0 = 1 uniform base, atoms 0.2 and 0.6 with unit weights.
  const MixtureDistribution m(BaseMeasure::Uniform(0.0, 1.0), 1.0, {{0.2, 1.0}, {0.6, 1.0}});
  EXPECT_NEAR(m.Mean(), (0.5 + 0.2 + 0.6) / 3.0, 1e-15);
  EXPECT_NEAR(m.Cdf(0.2), (0.2 + 1.0) / 3.0, 1e-15);
  EXPECT_NEAR(m.CdfLeft(0.2), 0.2 / 3.0, 1e-15);
  EXPECT_NEAR(m.Cdf(0.7), (0.7 + 2.0) / 3.0, 1e-15);
}

TEST(MixtureDistribution, ZeroWeightAtomDropped) {
  const MixtureDistribution m(BaseMeasure::Uniform(0.0, 1.0), 1.0, {{0.3, 0.0}, {0.4, 1.0}});
  EXPECT_EQ(m.atoms().size(), 1u);
}

TEST(MixtureDistribution, SamplingMatchesCdf) {
  const MixtureDistribution m(BaseMeasure::Uniform(0.0, 1.0), 2.0, {{0.25, 1.0}, {0.75, 1.0}});
  RngStream rng(4, 0, 0);
  int at_quarter = 0, below_half = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = m.Sample(rng);
    at_quarter += x == 0.25;
    below_half += x < 0.5;
  }
  EXPECT_NEAR(at_quarter / double(n), 0.25, 0.005);
  EXPECT_NEAR(below_half / double(n), 0.5, 0.005);
}

TEST(WeightDistribution, SupportIsPositive) {
  RngStream rng(8, 0, 0);
  const std::vector<WeightDistribution> laws = {
      WeightDistribution(DegenerateWeight{2.0}), WeightDistribution(TwoPointWeight{1.0, 3.0, 0.5}),
      WeightDistribution(UniformWeight{0.5, 1.5}), WeightDistribution(ShiftedGammaWeight{2.0, 1.0, 0.5})};
  for (const auto& w : laws) {
    for (int i = 0; i < 1000; ++i) EXPECT_GT(w.Sample(rng), 0.0);
  }
}

TEST(ReinforcedCoordState, TracksTotalsAndMoments) {
  ReinforcedCoordState s(BaseMeasure::Uniform(0.0, 1.0), 1.0);
  s.Reinforce(0.2, 1.0);
  s.Reinforce(0.6, 3.0);
  EXPECT_DOUBLE_EQ(s.total_weight(), 5.0);
  EXPECT_DOUBLE_EQ(s.RecomputedTotal(), 5.0);
  EXPECT_NEAR(s.Mean(), (0.5 + 0.2 + 1.8) / 5.0, 1e-15);
  const auto m = reinforced_predictive(s);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(m.RawMoment(k), s.RawMoment(k), 1e-14);
}

TEST(ReinforcedCoordState, ZeroWeightIsNoOp) {
  ReinforcedCoordState s(BaseMeasure::Uniform(0.0, 1.0), 1.0);
  s.Reinforce(0.3, 0.0);
  EXPECT_EQ(s.atom_count(), 0u);
  EXPECT_DOUBLE_EQ(s.total_weight(), 1.0);
}

TEST(ReinforcedCoordState, RejectsBadWeights) {
  ReinforcedCoordState s(BaseMeasure::Uniform(0.0, 1.0), 1.0);
  EXPECT_THROW(s.Reinforce(0.3, -1.0), ReinforcementError);
  EXPECT_THROW(s.Reinforce(0.3, std::nan("")), ReinforcementError);
  EXPECT_THROW(s.Reinforce(0.3, INFINITY), ReinforcementError);
}

TEST(ReinforcedCoordState, RescalingKeepsPredictive) {
  ReinforcedCoordState s(BaseMeasure::Uniform(0.0, 1.0), 1.0);
  s.Reinforce(0.25, 1e200);
  const double mean_before = s.Mean();
  for (int i = 0; i < 5; ++i) s.Reinforce(0.75, 1e200 * std::pow(10.0, 20 * i));
  EXPECT_TRUE(std::isfinite(s.total_weight()));
  EXPECT_NEAR(s.RecomputedTotal() / s.total_weight(), 1.0, 1e-12);
  EXPECT_GT(s.Mean(), mean_before);
  EXPECT_NEAR(reinforced_predictive(s).TotalProbability(), 1.0, 1e-12);
}

// E[alpha_{n+1}(f) | G_n] = alpha_n(f), summed exactly over every outcome of
// (X, W) for a discrete base and a two-point weight.
TEST(ReinforcedCoordState, MartingaleIdentityOnAtoms) {
  ReinforcedCoordState s(BaseMeasure::Discrete({0.0, 1.0, 2.0}, {0.2, 0.5, 0.3}), 1.5);
  s.Reinforce(1.0, 2.0);
  s.Reinforce(2.0, 0.5);
  s.Reinforce(0.0, 3.0);
  const auto pred = reinforced_predictive(s);
  const TwoPointWeight w{1.0, 3.0, 0.25};
  for (int k = 1; k <= 4; ++k) {
    double expected = 0.0;
    for (double x : {0.0, 1.0, 2.0}) {
      const double px = pred.Cdf(x) - pred.CdfLeft(x);
      for (auto [wv, pw] : {std::pair{w.low, w.p_low}, std::pair{w.high, 1.0 - w.p_low}}) {
        ReinforcedCoordState next = s;
        next.Reinforce(x, wv);
        expected += px * pw * next.RawMoment(k);
      }
    }
    EXPECT_NEAR(expected, s.RawMoment(k), 1e-14) << "k=" << k;
  }
}

TEST(WeightFromFraction, InvertsFraction) {
  const double w = weight_from_fraction(4.0, 0.2);
  EXPECT_NEAR(w / (4.0 + w), 0.2, 1e-15);
  EXPECT_EQ(weight_from_fraction(4.0, 0.0), 0.0);
  EXPECT_THROW(weight_from_fraction(4.0, 1.0), std::exception);
  EXPECT_THROW(weight_from_fraction(4.0, -0.1), std::exception);
}

TEST(UniformCoupledStep, AtomFractionsFollowOtherCoordinate) {
  std::vector<ReinforcedCoordState> st = {{BaseMeasure::Uniform(0.0, 1.0), 1.0},
                                          {BaseMeasure::Uniform(0.0, 1.0), 1.0}};
  PathStreams streams(1, 0, 2);
  std::vector<double> x(2), w(2);
  uniform_coupled_step(st, 1.0, streams, x, w);
  // beta_1 = 1: the new atom of coordinate i carries fraction X_{1,j}.
  EXPECT_NEAR(st[0].atom_weights()[0] / st[0].total_weight(), x[1], 1e-14);
  EXPECT_NEAR(st[1].atom_weights()[0] / st[1].total_weight(), x[0], 1e-14);
}

TEST(GaussianUpdate, ConvexCombination) {
  GaussianCoordState s{1.0, 2.0};
  gaussian_update(s, 3.0, 0.25);
  EXPECT_DOUBLE_EQ(s.mu, 1.5);
  EXPECT_DOUBLE_EQ(s.sigma2, 2.0 * (1.0 - 0.0625));
}

TEST(PoissonArrivals, IncreasingWithMeanSpacing) {
  RngStream rng(2, 0, 0);
  const auto t = poisson_arrivals(2.0, 100000, rng);
  for (std::size_t k = 1; k < t.size(); ++k) ASSERT_GT(t[k], t[k - 1]);
  EXPECT_NEAR(t.back() / t.size(), 0.5, 0.01);
}

}  // namespace
}  // namespace pcid
