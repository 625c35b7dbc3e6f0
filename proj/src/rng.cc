// Copyright 2026 The wpirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wpir/rng.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace wpir {

std::uint64_t Rng::SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng Rng::Substream(std::string_view label) const {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return Rng(SplitMix64(seed_ ^ SplitMix64(h)));
}

Rng Rng::Substream(std::uint64_t index) const {
  return Rng(SplitMix64(seed_ ^ SplitMix64(index ^ 0x5DEECE66Dull)));
}

std::uint64_t Rng::UniformInt(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformInt range must be positive");
  if ((n & (n - 1)) == 0) return Next() & (n - 1);
  // Largest multiple of n that fits; reject above it.
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  std::uint64_t x;
  do {
    x = Next();
  } while (x >= limit);
  return x % n;
}

double Rng::UniformReal() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

std::vector<std::uint32_t> Rng::Permutation(std::uint32_t n) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) {
    std::swap(p[i - 1], p[UniformInt(i)]);
  }
  return p;
}

std::vector<std::uint32_t> Rng::Subset(std::uint32_t n, std::uint32_t k) {
  if (k > n) throw std::invalid_argument("subset larger than ground set");
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  for (std::uint32_t i = 0; i < k; ++i) {
    std::swap(p[i], p[i + UniformInt(n - i)]);
  }
  p.resize(k);
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace wpir
