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

#include "wpir/sunjafar.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "wpir/setting.h"

namespace wpir {
namespace {

std::vector<int> AllFiles(int files) {
  if (files < 1) throw std::invalid_argument("need at least one file");
  std::vector<int> out(files);
  std::iota(out.begin(), out.end(), 1);
  return out;
}

void CheckPermutations(std::span<const std::vector<std::uint32_t>> perms,
                       std::size_t files, std::uint32_t units) {
  if (perms.size() != files) {
    throw std::invalid_argument(fmt::format(
        "expected {} permutations, got {}", files, perms.size()));
  }
  for (const auto& p : perms) {
    if (p.size() != units) {
      throw std::invalid_argument("permutation has the wrong length");
    }
  }
}

}  // namespace

int ThetaPosition(std::span<const int> files, int theta) {
  if (files.empty()) throw std::invalid_argument("no participating files");
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i] < 1 || (i > 0 && files[i] <= files[i - 1])) {
      throw std::invalid_argument("files must be sorted, distinct and >= 1");
    }
  }
  auto it = std::find(files.begin(), files.end(), theta);
  if (it == files.end()) {
    throw std::invalid_argument(
        fmt::format("theta {} is not among the participating files", theta));
  }
  return static_cast<int>(it - files.begin());
}

SjRandomness SampleSjRandomness(int servers, int files, Rng& rng) {
  const auto units = static_cast<std::uint32_t>(IntPow(servers, files));
  SjRandomness rand;
  for (int p = 0; p < files; ++p) rand.permutations.push_back(rng.Permutation(units));
  return rand;
}

std::vector<QueryToken> PermutedQueries(
    const RoundPlan& plan, std::span<const int> files,
    std::span<const std::vector<std::uint32_t>> perms) {
  CheckPermutations(perms, files.size(), plan.units());
  const int n = plan.shape().servers;
  const int theta_pos = plan.theta_pos();
  std::vector<QueryToken> out;
  out.reserve(n);
  for (int server = 0; server < n; ++server) {
    std::vector<Combination> combos;
    combos.reserve(plan.slots(server).size());
    for (const PlanSlot& slot : plan.slots(server)) {
      Combination c;
      if (slot.group >= 0) {
        const PlanGroup& g = plan.groups()[slot.group];
        for (std::size_t i = 0; i < g.positions.size(); ++i) {
          const int p = g.positions[i];
          c.push_back({static_cast<std::uint16_t>(files[p]),
                       perms[p][g.logical[i][0]] + 1, 1});
        }
      }
      if (slot.desired) {
        c.push_back({static_cast<std::uint16_t>(files[theta_pos]),
                     perms[theta_pos][slot.desired_unit] + 1, 1});
      }
      std::sort(c.begin(), c.end());
      combos.push_back(std::move(c));
    }
    out.push_back(QueryToken::Structured(std::move(combos)));
  }
  return out;
}

std::vector<QueryToken> SjQueryOn(int servers, std::span<const int> files,
                                  int theta, const SjRandomness& rand) {
  const int pos = ThetaPosition(files, theta);
  auto plan = CachedPlan({servers, 1, 1, 1}, static_cast<int>(files.size()), pos);
  return PermutedQueries(*plan, files, rand.permutations);
}

std::vector<QueryToken> SjQuery(int servers, int files, int theta,
                                const SjRandomness& rand) {
  if (theta < 1 || theta > files) {
    throw std::invalid_argument(fmt::format("theta {} not in [1:{}]", theta, files));
  }
  const std::vector<int> all = AllFiles(files);
  return SjQueryOn(servers, all, theta, rand);
}

AnswerString SjAnswer(const QueryToken& q, const FileLibrary& library,
                      int servers) {
  return EvaluateStructured(
      q, [&](int k) { return library.file(k); }, library.length(), servers,
      *library.field());
}

std::vector<Symbol> SjDecodeOn(int servers, std::span<const int> files,
                               int theta, const SjRandomness& rand,
                               std::span<const AnswerString> answers,
                               const Field& field) {
  const int pos = ThetaPosition(files, theta);
  auto plan = CachedPlan({servers, 1, 1, 1}, static_cast<int>(files.size()), pos);
  CheckPermutations(rand.permutations, files.size(), plan->units());
  const RoundDecoder decoder(*plan, field, answers);
  const std::uint64_t block = decoder.block();
  std::vector<Symbol> out(plan->units() * block, 0);
  std::vector<bool> seen(plan->units(), false);
  for (const auto& d : decoder.desired()) {
    const std::uint32_t segment = rand.permutations[pos][d.unit];
    seen[segment] = true;
    std::copy(d.value.begin(), d.value.end(), out.begin() + segment * block);
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::logic_error("decoder left a segment unrecovered");
  }
  return out;
}

std::vector<Symbol> SjDecode(int servers, int files, int theta,
                             const SjRandomness& rand,
                             std::span<const AnswerString> answers,
                             const Field& field) {
  if (theta < 1 || theta > files) {
    throw std::invalid_argument(fmt::format("theta {} not in [1:{}]", theta, files));
  }
  const std::vector<int> all = AllFiles(files);
  return SjDecodeOn(servers, all, theta, rand, answers, field);
}

std::uint64_t SjDownloadTotal(int servers, int files) {
  std::uint64_t total = 0;
  for (int s = 1; s <= files; ++s) total += IntPow(servers, s);
  return total;
}

}  // namespace wpir
