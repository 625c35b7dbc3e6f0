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

#ifndef WPIR_SETTING_H_
#define WPIR_SETTING_H_

#include <cstdint>
#include <string>

#include "wpir/rational.h"

namespace wpir {

enum class Variant { kReplicated, kMds, kTCollusion };

std::string VariantName(Variant v);
// Accepts "replicated", "mds", "tcollusion" (also "t-collusion", "tcoll").
Variant ParseVariant(const std::string& text);

// A retrieval scenario. `r` is the redundancy parameter shared by every
// rate and leakage formula: 1 for replicated storage, K for (N,K)-MDS
// storage, T for T-colluding servers.
struct PirSetting {
  Variant variant = Variant::kReplicated;
  int servers = 2;  // N
  int files = 2;    // M
  int r = 1;

  static PirSetting Replicated(int n, int m);
  static PirSetting Mds(int n, int k, int m);
  static PirSetting TCollusion(int n, int t, int m);

  // Throws std::invalid_argument unless N >= 2, M >= 1, 1 <= r < N and
  // r == 1 for the replicated variant.
  void Validate() const;

  // Servers that must jointly stay ignorant of theta (T, else 1).
  int collusion_size() const { return variant == Variant::kTCollusion ? r : 1; }
  // Segments (rows, for MDS) per file: N^M.
  std::uint64_t segments() const;
  // Symbols per file: K * N^M for MDS, N^M otherwise.
  std::uint64_t file_length() const;

  std::string ToString() const;
  bool operator==(const PirSetting&) const = default;
};

// (1 + r/N + ... + (r/N)^(M-1))^-1, the zero-leakage capacity.
Rational Capacity(const PirSetting& setting);

// n^e for small non-negative integers; throws on overflow.
std::uint64_t IntPow(std::uint64_t n, int e);
std::uint64_t Binomial(int n, int k);

}  // namespace wpir

#endif  // WPIR_SETTING_H_
