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

#include "wpir/tpir.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "wpir/round_plan.h"
#include "wpir/setting.h"
#include "wpir/sunjafar.h"

namespace wpir {
namespace {

void CheckParameters(int servers, int t, const Field& field) {
  if (t < 1 || t >= servers) {
    throw std::invalid_argument(
        fmt::format("T-collusion needs 1 <= T < N, got T={} N={}", t, servers));
  }
  if (field.order() <= static_cast<std::uint32_t>(servers)) {
    throw std::invalid_argument(fmt::format(
        "{} has too few elements for {} servers", field.Name(), servers));
  }
}

std::shared_ptr<const RoundPlan> PlanFor(int servers, int t, std::size_t files,
                                         int pos) {
  return CachedPlan({servers, t, 1, t}, static_cast<int>(files), pos);
}

void CheckMatrices(const TsjRandomness& rand, std::size_t files,
                   std::uint32_t units) {
  if (rand.matrices.size() != files || rand.units != static_cast<int>(units)) {
    throw std::invalid_argument("randomness does not match the file set");
  }
  for (const auto& m : rand.matrices) {
    if (m.size() != static_cast<std::size_t>(units) * units) {
      throw std::invalid_argument("mixing matrix has the wrong size");
    }
  }
}

}  // namespace

TsjRandomness SampleTsjRandomness(int servers, int files, const Field& field,
                                  Rng& rng) {
  TsjRandomness rand;
  rand.units = static_cast<int>(IntPow(servers, files));
  const std::size_t cells = static_cast<std::size_t>(rand.units) * rand.units;
  for (int p = 0; p < files; ++p) {
    std::vector<Symbol> m(cells);
    do {
      for (Symbol& x : m) x = static_cast<Symbol>(rng.UniformInt(field.order()));
    } while (!InvertMatrix(field, m, rand.units));
    rand.matrices.push_back(std::move(m));
  }
  return rand;
}

std::vector<QueryToken> TsjQueryOn(int servers, int t,
                                   std::span<const int> files, int theta,
                                   const TsjRandomness& rand,
                                   const Field& field) {
  CheckParameters(servers, t, field);
  const int pos = ThetaPosition(files, theta);
  auto plan = PlanFor(servers, t, files.size(), pos);
  const std::uint32_t units = plan->units();
  CheckMatrices(rand, files.size(), units);
  auto row = [&](int p, std::uint32_t i) {
    return std::span<const Symbol>(rand.matrices[p]).subspan(
        static_cast<std::size_t>(i) * units, units);
  };

  std::vector<QueryToken> out;
  for (int server = 0; server < servers; ++server) {
    const Symbol x = static_cast<Symbol>(server + 1);
    std::vector<Combination> combos;
    for (const PlanSlot& slot : plan->slots(server)) {
      // Coefficient vector per participating position; empty = absent.
      std::vector<std::vector<Symbol>> vec(files.size());
      if (slot.group >= 0) {
        const PlanGroup& g = plan->groups()[slot.group];
        for (std::size_t i = 0; i < g.positions.size(); ++i) {
          auto& v = vec[g.positions[i]];
          v.assign(units, 0);
          for (int w = 0; w < t; ++w) {
            field.AddScaled(v, field.Pow(x, w), row(g.positions[i], g.logical[i][w]));
          }
        }
      }
      if (slot.desired) {
        const auto r = row(pos, slot.desired_unit);
        vec[pos].assign(r.begin(), r.end());
      }
      Combination c;
      for (std::size_t p = 0; p < files.size(); ++p) {
        for (std::uint32_t j = 0; j < vec[p].size(); ++j) {
          c.push_back({static_cast<std::uint16_t>(files[p]), j + 1, vec[p][j]});
        }
      }
      combos.push_back(std::move(c));
    }
    out.push_back(QueryToken::Structured(std::move(combos)));
  }
  return out;
}

std::vector<QueryToken> TsjQuery(int servers, int t, int files, int theta,
                                 const TsjRandomness& rand, const Field& field) {
  if (theta < 1 || theta > files) {
    throw std::invalid_argument(fmt::format("theta {} not in [1:{}]", theta, files));
  }
  std::vector<int> all(files);
  std::iota(all.begin(), all.end(), 1);
  return TsjQueryOn(servers, t, all, theta, rand, field);
}

AnswerString TsjAnswer(const QueryToken& q, const FileLibrary& library,
                       int servers) {
  return SjAnswer(q, library, servers);
}

std::vector<Symbol> TsjDecodeOn(int servers, int t, std::span<const int> files,
                                int theta, const TsjRandomness& rand,
                                std::span<const AnswerString> answers,
                                const Field& field) {
  CheckParameters(servers, t, field);
  const int pos = ThetaPosition(files, theta);
  auto plan = PlanFor(servers, t, files.size(), pos);
  const std::uint32_t units = plan->units();
  CheckMatrices(rand, files.size(), units);
  const RoundDecoder decoder(*plan, field, answers);
  const std::uint64_t block = decoder.block();

  // A[u] = S_theta[u] . X, blockwise.
  std::vector<const std::vector<Symbol>*> a(units, nullptr);
  for (const auto& d : decoder.desired()) a[d.unit] = &d.value;
  auto inv = InvertMatrix(field, rand.matrices[pos], units);
  if (!inv) throw std::invalid_argument("mixing matrix is singular");

  std::vector<Symbol> out(static_cast<std::size_t>(units) * block, 0);
  for (std::uint32_t j = 0; j < units; ++j) {
    std::span<Symbol> dst(out.data() + j * block, block);
    for (std::uint32_t u = 0; u < units; ++u) {
      if (a[u] == nullptr) throw std::logic_error("unit never downloaded");
      field.AddScaled(dst, (*inv)[static_cast<std::size_t>(j) * units + u], *a[u]);
    }
  }
  return out;
}

std::vector<Symbol> TsjDecode(int servers, int t, int files, int theta,
                              const TsjRandomness& rand,
                              std::span<const AnswerString> answers,
                              const Field& field) {
  if (theta < 1 || theta > files) {
    throw std::invalid_argument(fmt::format("theta {} not in [1:{}]", theta, files));
  }
  std::vector<int> all(files);
  std::iota(all.begin(), all.end(), 1);
  return TsjDecodeOn(servers, t, all, theta, rand, answers, field);
}

std::uint64_t TsjDownloadTotal(int servers, int t, int files) {
  if (t < 1 || t >= servers) throw std::invalid_argument("need 1 <= T < N");
  return static_cast<std::uint64_t>(servers) *
         (IntPow(servers, files) - IntPow(t, files)) / (servers - t);
}

}  // namespace wpir
