// Copyright 2026 The Authors.
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

// Seeded randomness. Every builder derives all of its randomness from a
// single 64-bit seed through the functions here, so plans are bit-identical
// across platforms and standard libraries.

#ifndef F2SKETCH_RANDOM_HPP_
#define F2SKETCH_RANDOM_HPP_

#include <cstdint>
#include <limits>

namespace f2sketch {

__extension__ typedef unsigned __int128 uint128_t;
__extension__ typedef __int128 int128_t;

// SplitMix64 finalizer; a bijective 64-bit mixer used as the PRF.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of the i-th independent trial / component under `base`. The base is
// mixed before the index is folded in; with mix64(base ^ i), bases that differ
// only in low bits would share the same set of trial seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t i) {
  return mix64(mix64(base) ^ i);
}

// PRF mapping (key, index) to a bucket in [0, buckets).
inline std::uint64_t hash_to_bucket(std::uint64_t key, std::uint64_t index,
                                    std::uint64_t buckets) {
  const std::uint64_t h = mix64(mix64(key) ^ (index + 0x9e3779b97f4a7c15ULL));
  return static_cast<std::uint64_t>(
      (static_cast<uint128_t>(h) * buckets) >> 64);
}

// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound); bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound) {
    uint128_t m = static_cast<uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

 private:
  std::uint64_t state_;
};

// Precomputed Bernoulli(p) test against raw 64-bit draws; the hot loop of
// biased-row generation.
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(double p) {
    if (p <= 0.0) {
      always_ = false;
      never_ = true;
    } else if (p >= 1.0) {
      always_ = true;
    } else {
      threshold_ = static_cast<std::uint64_t>(p * 0x1.0p64);
    }
  }
  bool operator()(SplitMix64& rng) const {
    if (always_) return true;
    if (never_) return false;
    return rng() < threshold_;
  }

 private:
  std::uint64_t threshold_ = 0;
  bool always_ = false;
  bool never_ = false;
};

}  // namespace f2sketch

#endif  // F2SKETCH_RANDOM_HPP_
