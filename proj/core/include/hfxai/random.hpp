/*
 * Copyright 2026 The hfxai Authors.
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

#ifndef HFXAI_RANDOM_HPP_
#define HFXAI_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace hfxai {

// Mixes a base seed with a list of tags (splitmix64 finalizer). Used to give
// every tree, fold and candidate an independent, order-free random stream.
inline std::uint64_t DeriveSeed(std::uint64_t base,
                                std::initializer_list<std::uint64_t> tags) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (std::uint64_t t : tags) h = mix(h ^ mix(t + 0x632be59bd9b4e019ULL));
  return h;
}

// Random source with platform-independent sampling helpers. The standard
// distributions are implementation-defined, so they are avoided wherever the
// draws feed into emitted results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling removes modulo bias.
  std::size_t Index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[Index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hfxai

#endif  // HFXAI_RANDOM_HPP_
