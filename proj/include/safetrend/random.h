// Copyright 2026 The SafeTrend Authors
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

#ifndef SAFETREND_RANDOM_H_
#define SAFETREND_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace safetrend {

// Source of uniformly distributed 64-bit words. All derived draws (unit
// doubles, bounded integers) are computed here from raw words so that a
// seeded source produces bit-identical streams on every platform; the
// distributions in <random> make no such guarantee.
//
// A single instance must not be shared between concurrent callers.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual uint64_t NextU64() = 0;

  // Uniform on [0, 1) with 53 bits of resolution.
  double UniformUnit();

  // Uniform on [lower, upper]. Requires lower <= upper.
  double Uniform(double lower, double upper);

  // Uniform integer on the closed range [lower, upper], unbiased.
  uint64_t UniformInt(uint64_t lower, uint64_t upper);

  // Fisher-Yates shuffle driven by UniformInt.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(UniformInt(0, i - 1));
      std::swap(items[i - 1], items[j]);
    }
  }
};

// SplitMix64: a counter-based generator. Output k is a fixed bijective mix of
// seed + (k + 1) * golden_gamma, so streams are reproducible from the seed
// alone.
class SplitMix64 final : public RandomSource {
 public:
  explicit SplitMix64(uint64_t seed) : seed_(seed), state_(seed) {}

  uint64_t NextU64() override;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t state_;
};

// Draws every word from the operating system entropy pool (getrandom(2)).
// Not reproducible; used when shares must not be derivable from a seed.
class SystemEntropySource final : public RandomSource {
 public:
  uint64_t NextU64() override;

 private:
  uint64_t buffer_[32] = {};
  size_t available_ = 0;
};

// Mixes a base seed and a stream label into an independent seed.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

}  // namespace safetrend

#endif  // SAFETREND_RANDOM_H_
