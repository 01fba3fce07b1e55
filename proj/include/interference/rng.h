// Copyright 2026 The Interference Lab Authors.
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

#ifndef INTERFERENCE_RNG_H_
#define INTERFERENCE_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace interference {

// All randomness flows through mt19937_64. The helpers below avoid the
// standard distributions, whose algorithms are implementation-defined, so
// that a seed reproduces the same draws on every standard library.
using Rng = std::mt19937_64;

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the independent stream `stream` under `master`.
inline uint64_t StreamSeed(uint64_t master, uint64_t stream) {
  return SplitMix64(SplitMix64(master) ^ SplitMix64(~stream));
}

inline Rng MakeStream(uint64_t master, uint64_t stream) {
  return Rng(StreamSeed(master, stream));
}

// Uniform on [0, 1) with 53 random bits.
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformDouble(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * UniformDouble(rng);
}

// Uniform integer on [0, bound) by rejection; bound must be positive.
inline uint64_t UniformIndex(Rng& rng, uint64_t bound) {
  const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % bound);
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

// Uniform integer on the closed range [lo, hi].
inline int64_t UniformInt(Rng& rng, int64_t lo, int64_t hi) {
  return lo + static_cast<int64_t>(
                  UniformIndex(rng, static_cast<uint64_t>(hi - lo) + 1));
}

// Standard normal via Box-Muller (one value per call).
inline double StandardNormal(Rng& rng) {
  double u1;
  do {
    u1 = UniformDouble(rng);
  } while (u1 <= 0.0);
  const double u2 = UniformDouble(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Fisher-Yates.
template <typename T>
void Shuffle(std::span<T> values, Rng& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = UniformIndex(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace interference

#endif  // INTERFERENCE_RNG_H_
