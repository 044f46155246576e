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

#include <benchmark/benchmark.h>

#include <vector>

#include "pcid/engine.hpp"
#include "pcid/hypothesis.hpp"
#include "pcid/rng.hpp"

namespace pcid {
namespace {

void BM_PhiloxUniform(benchmark::State& state) {
  RngStream rng(1, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.Uniform());
}
BENCHMARK(BM_PhiloxUniform);

void StepPath(benchmark::State& state, const ProcessSpec& spec) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  std::uint64_t path = 0;
  for (auto _ : state) {
    PathSimulator sim(spec, 1, path++);
    for (std::size_t n = 0; n < steps; ++n) benchmark::DoNotOptimize(sim.Step().data());
    benchmark::DoNotOptimize(sim.PredictiveMean(0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PolyaPath(benchmark::State& state) {
  StepPath(state, ProcessSpec::Polya(2, BaseMeasure::Uniform(0.0, 1.0)));
}
BENCHMARK(BM_PolyaPath)->Arg(1000)->Arg(10000);

void BM_UniformCoupledPath(benchmark::State& state) {
  StepPath(state, ProcessSpec::UniformCoupled(BetaSchedule::Harmonic()));
}
BENCHMARK(BM_UniformCoupledPath)->Arg(1000)->Arg(10000);

void BM_GaussianLastTickPath(benchmark::State& state) {
  StepPath(state, ProcessSpec::GaussianLastTick({0.0, 1.0}, {1.0, 2.0}));
}
BENCHMARK(BM_GaussianLastTickPath)->Arg(1000);

std::vector<double> Sample(std::size_t rows, std::size_t dim, std::uint64_t sub) {
  RngStream rng(2, 0, sub);
  std::vector<double> v(rows * dim);
  for (double& x : v) x = rng.Normal();
  return v;
}

void BM_EnergyTest(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto a = Sample(rows, 3, 0);
  const auto b = Sample(rows, 3, 1);
  for (auto _ : state) {
    RngStream rng(3, 0, 0);
    benchmark::DoNotOptimize(energy_test(a, b, 3, 19, rng).p_value);
  }
}
BENCHMARK(BM_EnergyTest)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KsTwoSample(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto a = Sample(rows, 1, 0);
  const auto b = Sample(rows, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b).p_value);
}
BENCHMARK(BM_KsTwoSample)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace pcid

BENCHMARK_MAIN();
