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

// Capacity-achieving scheme private against any T colluding servers among N
// replicated servers.
//
// Each participating file gets a uniformly random invertible N^m x N^m mixing
// matrix S. Desired requests are fresh rows of S_theta. Undesired material
// comes in groups of T fresh rows (s_1..s_T) per file; server n receives the
// evaluation sum_t (n+1)^(t-1) s_t, so any T servers see independent uniform
// vectors while the T window servers pin down the group at every other server.
#ifndef WPIR_TPIR_H_
#define WPIR_TPIR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "wpir/core.h"
#include "wpir/galois.h"
#include "wpir/rng.h"

namespace wpir {

struct TsjRandomness {
  int units = 0;  // N^m
  // matrices[p]: row-major units x units invertible matrix for the p-th
  // participating file.
  std::vector<std::vector<Symbol>> matrices;

  bool operator==(const TsjRandomness&) const = default;
};

TsjRandomness SampleTsjRandomness(int servers, int files, const Field& field,
                                  Rng& rng);

// Throws std::invalid_argument unless 1 <= T < N, theta in range and the
// field has more than N elements.
std::vector<QueryToken> TsjQuery(int servers, int t, int files, int theta,
                                 const TsjRandomness& rand, const Field& field);
std::vector<QueryToken> TsjQueryOn(int servers, int t,
                                   std::span<const int> files, int theta,
                                   const TsjRandomness& rand,
                                   const Field& field);

AnswerString TsjAnswer(const QueryToken& q, const FileLibrary& library,
                       int servers);

std::vector<Symbol> TsjDecode(int servers, int t, int files, int theta,
                              const TsjRandomness& rand,
                              std::span<const AnswerString> answers,
                              const Field& field);
std::vector<Symbol> TsjDecodeOn(int servers, int t, std::span<const int> files,
                                int theta, const TsjRandomness& rand,
                                std::span<const AnswerString> answers,
                                const Field& field);

// N^M * sum_{i=0}^{M-1} (T/N)^i = N (N^M - T^M) / (N - T).
std::uint64_t TsjDownloadTotal(int servers, int t, int files);

}  // namespace wpir

#endif  // WPIR_TPIR_H_
