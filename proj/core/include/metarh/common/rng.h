/*
 * Copyright 2026 The MetaRH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef METARH_COMMON_RNG_H_
#define METARH_COMMON_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace metarh {

// Mixes a seed with stream coordinates (splitmix64 finalizer), so episodes can
// be reproduced from (seed, task, episode index) alone.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Random source with platform-stable distributions. The standard library
// distributions are implementation-defined, so bounded integers and reals are
// derived from the raw 64-bit engine here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t UniformIndex(std::uint64_t n);

  // Uniform real in [0, 1) with 53 random bits.
  double UniformReal();

  double Uniform(double lo, double hi) { return lo + (hi - lo) * UniformReal(); }

  double Normal(double mean, double stddev);

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = UniformIndex(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  // Draws min(count, n) distinct indices from [0, n) in sampling order.
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace metarh

#endif  // METARH_COMMON_RNG_H_
