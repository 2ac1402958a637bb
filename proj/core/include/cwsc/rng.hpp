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

#ifndef CWSC_RNG_HPP_
#define CWSC_RNG_HPP_

#include <cstdint>
#include <random>

namespace cwsc {

// SplitMix64 finalizer. Replica r of an experiment with base seed b draws
// from a stream seeded with mix_seed(b, r); this is the entire randomness
// contract of the project, so runs are reproducible and parallelizable.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t replica) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (replica + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded random stream. Wraps the (fully standardized) mt19937_64 engine and
// exposes only the draws the samplers need, so sequences are identical on
// every platform for a given seed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  static RngStream for_replica(std::uint64_t base_seed, std::uint64_t replica) {
    return RngStream(mix_seed(base_seed, replica));
  }

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // +1 with probability p, else -1.
  int sign_with_prob(double p) { return uniform() < p ? +1 : -1; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace cwsc

#endif  // CWSC_RNG_HPP_
