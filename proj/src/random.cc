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

#include "safetrend/random.h"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

namespace safetrend {
namespace {

constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double RandomSource::UniformUnit() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double RandomSource::Uniform(double lower, double upper) {
  const double value = lower + (upper - lower) * UniformUnit();
  return value > upper ? upper : value;
}

uint64_t RandomSource::UniformInt(uint64_t lower, uint64_t upper) {
  const uint64_t span = upper - lower;
  if (span == std::numeric_limits<uint64_t>::max()) return NextU64();
  const uint64_t range = span + 1;
  // Reject the top partial bucket so every residue is equally likely.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % range;
  uint64_t word;
  do {
    word = NextU64();
  } while (word >= limit);
  return lower + word % range;
}

uint64_t SplitMix64::NextU64() {
  state_ += kGoldenGamma;
  return Mix64(state_);
}

uint64_t SystemEntropySource::NextU64() {
  if (available_ == 0) {
    auto* bytes = reinterpret_cast<unsigned char*>(buffer_);
    size_t filled = 0;
    while (filled < sizeof(buffer_)) {
      const ssize_t got = getrandom(bytes + filled, sizeof(buffer_) - filled, 0);
      if (got < 0) {
        if (errno == EINTR) continue;
        throw std::runtime_error(std::string("getrandom failed: ") +
                                 std::strerror(errno));
      }
      filled += static_cast<size_t>(got);
    }
    available_ = sizeof(buffer_) / sizeof(buffer_[0]);
  }
  return buffer_[--available_];
}

uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return Mix64(Mix64(seed ^ kGoldenGamma) + Mix64(stream + kGoldenGamma));
}

}  // namespace safetrend
