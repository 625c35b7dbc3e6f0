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

#ifndef WPIR_RNG_H_
#define WPIR_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace wpir {

// Seeded generator used for every random choice in the project.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. The std:: distributions are implementation-defined, so bounded
// integers and reals are derived here instead:
//   UniformInt(n)  rejection sampling on the top bits of a 64-bit draw;
//   UniformReal()  (draw >> 11) * 2^-53.
//
// Substreams: a child seed is SplitMix64(seed ^ SplitMix64(FNV-1a(label)))
// (or of the integer index), so every consumer gets an independent stream
// that does not depend on how many draws its siblings made.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  Rng Substream(std::string_view label) const;
  Rng Substream(std::uint64_t index) const;

  std::uint64_t Next() { return engine_(); }
  // Uniform on [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  // Uniform on [0, 1).
  double UniformReal();
  // Uniformly random permutation of 0..n-1 (Fisher-Yates).
  std::vector<std::uint32_t> Permutation(std::uint32_t n);
  // Uniformly random k-subset of 0..n-1, sorted ascending.
  std::vector<std::uint32_t> Subset(std::uint32_t n, std::uint32_t k);

  static std::uint64_t SplitMix64(std::uint64_t x);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace wpir

#endif  // WPIR_RNG_H_
