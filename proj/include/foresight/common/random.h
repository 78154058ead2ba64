// Copyright 2026 The Foresight Authors
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

#ifndef FORESIGHT_COMMON_RANDOM_H_
#define FORESIGHT_COMMON_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace foresight {

// 64-bit finalizer from SplitMix64.
uint64_t Mix64(uint64_t x);

// FNV-1a over raw bytes, finalized with Mix64.
uint64_t HashBytes(std::span<const std::byte> bytes, uint64_t seed = 0);

template <typename T>
uint64_t HashSpan(std::span<const T> values, uint64_t seed = 0) {
  return HashBytes(std::as_bytes(values), seed);
}

uint64_t HashCombine(uint64_t a, uint64_t b);

// Sub-seed for a named role: Mix64(master ^ Mix64(FNV-1a(label))). Stable
// across platforms and releases; changing it invalidates recorded runs.
uint64_t DeriveSeed(uint64_t master_seed, std::string_view role_label);

// Seeded random stream. The engine is std::mt19937_64; the distributions are
// implemented here because the standard library ones are not portable
// bit-for-bit between implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);
  // Standard normal via the Marsaglia polar method.
  double Normal();
  double Normal(double mean, double stdev) { return mean + stdev * Normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace foresight

#endif  // FORESIGHT_COMMON_RANDOM_H_
