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

// Collusion-free capacity-achieving scheme for N replicated servers.
//
// Every function comes in two forms: over all files [1:M], and "On" a sorted
// subset of participating files, which is what the time-sharing wrapper runs
// with super-segmented storage. With m participating files there are N^m
// (super-)segments per file.
#ifndef WPIR_SUNJAFAR_H_
#define WPIR_SUNJAFAR_H_

#include <cstdint>
#include <span>
#include <vector>

#include "wpir/core.h"
#include "wpir/galois.h"
#include "wpir/rng.h"
#include "wpir/round_plan.h"

namespace wpir {

struct SjRandomness {
  // permutations[p] is a permutation of [0, N^m) for the p-th participating
  // file (in ascending file order).
  std::vector<std::vector<std::uint32_t>> permutations;

  bool operator==(const SjRandomness&) const = default;
};

SjRandomness SampleSjRandomness(int servers, int files, Rng& rng);

// Queries for one session; returns N tokens, token n for server n.
// Throws std::invalid_argument for N < 2, M < 1 or theta outside [1:M].
std::vector<QueryToken> SjQuery(int servers, int files, int theta,
                                const SjRandomness& rand);
std::vector<QueryToken> SjQueryOn(int servers, std::span<const int> files,
                                  int theta, const SjRandomness& rand);

// Evaluates a Structured token against a full replica.
AnswerString SjAnswer(const QueryToken& q, const FileLibrary& library,
                      int servers);

// Returns W_theta (length L of the library the answers came from).
std::vector<Symbol> SjDecode(int servers, int files, int theta,
                             const SjRandomness& rand,
                             std::span<const AnswerString> answers,
                             const Field& field);
std::vector<Symbol> SjDecodeOn(int servers, std::span<const int> files,
                               int theta, const SjRandomness& rand,
                               std::span<const AnswerString> answers,
                               const Field& field);

// sum_{s=1}^{M} N^s
std::uint64_t SjDownloadTotal(int servers, int files);

// Tokens of a permutation-indexed plan: logical index i of position p maps
// to segment perms[p][i] + 1, desired unit u to segment perms[theta][u] + 1.
// Shared with the MDS-coded scheme.
std::vector<QueryToken> PermutedQueries(
    const RoundPlan& plan, std::span<const int> files,
    std::span<const std::vector<std::uint32_t>> perms);

// Checks that `files` is sorted, distinct, positive and contains theta;
// returns theta's position.
int ThetaPosition(std::span<const int> files, int theta);

}  // namespace wpir

#endif  // WPIR_SUNJAFAR_H_
