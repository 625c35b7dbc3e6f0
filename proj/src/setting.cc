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

#include "wpir/setting.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace wpir {

std::string VariantName(Variant v) {
  switch (v) {
    case Variant::kReplicated:
      return "replicated";
    case Variant::kMds:
      return "mds";
    case Variant::kTCollusion:
      return "tcollusion";
  }
  return "unknown";
}

Variant ParseVariant(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != '-' && c != '_') {
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (t == "replicated" || t == "sj" || t == "wsj") return Variant::kReplicated;
  if (t == "mds" || t == "bu" || t == "wbu") return Variant::kMds;
  if (t == "tcollusion" || t == "tcoll" || t == "tsj" || t == "twsj") {
    return Variant::kTCollusion;
  }
  throw std::invalid_argument("unknown setting '" + text + "'");
}

PirSetting PirSetting::Replicated(int n, int m) {
  return {Variant::kReplicated, n, m, 1};
}
PirSetting PirSetting::Mds(int n, int k, int m) {
  return {Variant::kMds, n, m, k};
}
PirSetting PirSetting::TCollusion(int n, int t, int m) {
  return {Variant::kTCollusion, n, m, t};
}

void PirSetting::Validate() const {
  if (servers < 2) throw std::invalid_argument("need N >= 2 servers");
  if (files < 1) throw std::invalid_argument("need M >= 1 files");
  if (variant == Variant::kReplicated && r != 1) {
    throw std::invalid_argument("replicated storage has r = 1");
  }
  if (r < 1 || r >= servers) {
    throw std::invalid_argument(fmt::format(
        "{} = {} must satisfy 1 <= {} < N = {}",
        variant == Variant::kMds ? "K" : "T", r,
        variant == Variant::kMds ? "K" : "T", servers));
  }
  (void)file_length();
}

std::uint64_t PirSetting::segments() const { return IntPow(servers, files); }

std::uint64_t PirSetting::file_length() const {
  const std::uint64_t n = segments();
  return variant == Variant::kMds ? n * static_cast<std::uint64_t>(r) : n;
}

std::string PirSetting::ToString() const {
  switch (variant) {
    case Variant::kReplicated:
      return fmt::format("replicated(N={}, M={})", servers, files);
    case Variant::kMds:
      return fmt::format("mds(N={}, K={}, M={})", servers, r, files);
    case Variant::kTCollusion:
      return fmt::format("tcollusion(N={}, T={}, M={})", servers, r, files);
  }
  return "?";
}

Rational Capacity(const PirSetting& setting) {
  setting.Validate();
  const Rational ratio(setting.r, setting.servers);
  Rational sum = 0;
  Rational term = 1;
  for (int i = 0; i < setting.files; ++i) {
    sum += term;
    term *= ratio;
  }
  return Rational(1) / sum;
}

std::uint64_t IntPow(std::uint64_t n, int e) {
  std::uint64_t result = 1;
  for (int i = 0; i < e; ++i) {
    if (n != 0 && result > std::numeric_limits<std::uint32_t>::max() / n) {
      throw std::overflow_error(fmt::format("{}^{} is too large", n, e));
    }
    result *= n;
  }
  return result;
}

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / i;
  return c;
}

}  // namespace wpir
