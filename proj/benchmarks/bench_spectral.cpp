// Copyright 2026 the cwsc authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "cwsc/ensemble.hpp"
#include "cwsc/spectral.hpp"

namespace {

void EigenvaluesDense(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const cwsc::DeFinettiMeasure measure(cwsc::ModelParams(2.0, 2.0, n));
  cwsc::RngStream rng(3);
  const cwsc::SpinMatrix x = cwsc::sample_ensemble(measure, rng);
  const Eigen::MatrixXd dense = cwsc::build_a(x, measure.m()).to_dense();
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwsc::eigenvalues(dense));
  }
  state.SetComplexityN(n);
}
BENCHMARK(EigenvaluesDense)
    ->RangeMultiplier(2)
    ->Range(100, 800)
    ->Unit(benchmark::kMillisecond)
    ->Complexity();

void KsDistance(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const cwsc::DeFinettiMeasure measure(cwsc::ModelParams(2.0, 2.0, n));
  cwsc::RngStream rng(4);
  const cwsc::SpinMatrix x = cwsc::sample_ensemble(measure, rng);
  const cwsc::Spectrum spec =
      cwsc::eigenvalues(cwsc::build_a(x, measure.m()).to_dense());
  const cwsc::Esd esd(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwsc::ks_distance_semicircle(esd));
  }
}
BENCHMARK(KsDistance)->Arg(200)->Arg(800);

}  // namespace
