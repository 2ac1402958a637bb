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

#include "cwsc/definetti.hpp"

namespace {

void NormalizeMeasure(benchmark::State& state) {
  const cwsc::ModelParams params(2.0, 2.0, state.range(0));
  for (auto _ : state) {
    cwsc::DeFinettiMeasure measure(params);
    benchmark::DoNotOptimize(measure.z_shifted());
  }
}
BENCHMARK(NormalizeMeasure)->Arg(8)->Arg(32)->Arg(128)->Arg(512);

void SampleT(benchmark::State& state) {
  const cwsc::DeFinettiMeasure measure(cwsc::ModelParams(2.0, 2.0, 64));
  cwsc::RngStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure.sample_t(rng));
  }
}
BENCHMARK(SampleT);

void CentralMass(benchmark::State& state) {
  const cwsc::DeFinettiMeasure measure(cwsc::ModelParams(2.0, 1.0, 40));
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure.central_mass());
  }
}
BENCHMARK(CentralMass);

}  // namespace
