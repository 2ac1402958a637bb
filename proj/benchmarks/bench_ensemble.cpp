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
#include "cwsc/verification.hpp"

namespace {

void SampleSpinMatrix(benchmark::State& state) {
  cwsc::RngStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cwsc::sample_spin_matrix(0.5, state.range(0), rng));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(SampleSpinMatrix)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BinomialTail(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const std::int64_t entries = n * (n + 1) / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwsc::large_deviation_exact(n, 0.3));
  }
  state.SetComplexityN(entries);
}
BENCHMARK(BinomialTail)->Arg(16)->Arg(64)->Arg(256)->Complexity();

}  // namespace
