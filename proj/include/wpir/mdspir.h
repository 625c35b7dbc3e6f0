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

// (N,K) MDS-coded storage and the matching capacity-achieving scheme.
//
// A file of L = K * R symbols is an R x K matrix in row-major order. Row
// (a_1..a_K) becomes the polynomial p(x) = a_1 + a_2 x + ... + a_K x^(K-1),
// and server n stores p(n+1): a generalized Reed-Solomon code evaluated at the
// field elements 1..N.
#ifndef WPIR_MDSPIR_H_
#define WPIR_MDSPIR_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wpir/core.h"
#include "wpir/galois.h"
#include "wpir/rng.h"

namespace wpir {

class MdsCode {
 public:
  // Throws std::invalid_argument unless 1 <= K <= N and q > N.
  MdsCode(int servers, int k, FieldPtr field);

  int servers() const { return servers_; }
  int k() const { return k_; }
  const FieldPtr& field() const { return field_; }
  // Evaluation point of server n (0-based): the element n + 1.
  Symbol point(int server) const { return static_cast<Symbol>(server + 1); }

  // K symbols -> N coded symbols.
  std::vector<Symbol> Encode(std::span<const Symbol> row) const;
  // K (server, symbol) pairs -> the K-symbol row. Throws on a wrong count,
  // repeated or out-of-range server indices.
  std::vector<Symbol> Recover(
      std::span<const std::pair<int, Symbol>> columns) const;
  // Matrix (row-major K x K) mapping the symbols held by `servers`, in the
  // given order, to the row coefficients.
  std::vector<Symbol> RecoveryMatrix(std::span<const int> servers) const;

 private:
  int servers_;
  int k_;
  FieldPtr field_;
};

struct MdsStorage {
  int servers = 0;
  int k = 0;
  FieldPtr field;
  std::vector<Symbol> evaluation_points;
  // columns[n][k-1]: server n's coded column of file k, one symbol per row.
  std::vector<std::vector<std::vector<Symbol>>> columns;

  std::uint64_t rows() const;
  std::span<const Symbol> column(int server, int file) const;
};

// Throws std::invalid_argument if L is not a multiple of K or q <= N.
MdsStorage MdsEncode(const FileLibrary& library, int servers, int k);

// Recovers a row of a code with N servers and K = columns.size(); field
// elements 1..N are the evaluation points.
std::vector<Symbol> MdsRecover(std::span<const std::pair<int, Symbol>> columns,
                               int servers, FieldPtr field);

// Randomness: one permutation of the N^m row indices per participating file.
struct BuRandomness {
  std::vector<std::vector<std::uint32_t>> permutations;

  bool operator==(const BuRandomness&) const = default;
};

BuRandomness SampleBuRandomness(int servers, int files, Rng& rng);

std::vector<QueryToken> BuQuery(int servers, int k, int files, int theta,
                                const BuRandomness& rand);
std::vector<QueryToken> BuQueryOn(int servers, int k,
                                  std::span<const int> files, int theta,
                                  const BuRandomness& rand);

// Evaluates a Structured token on server `server`'s coded columns.
AnswerString BuAnswer(const QueryToken& q, const MdsStorage& storage,
                      int server);

// Returns W_theta, K * rows symbols.
std::vector<Symbol> BuDecode(int servers, int k, int files, int theta,
                             const BuRandomness& rand,
                             std::span<const AnswerString> answers,
                             const FieldPtr& field);
std::vector<Symbol> BuDecodeOn(int servers, int k, std::span<const int> files,
                               int theta, const BuRandomness& rand,
                               std::span<const AnswerString> answers,
                               const FieldPtr& field);

// K * N^M * sum_{i=0}^{M-1} (K/N)^i = K N (N^M - K^M) / (N - K).
std::uint64_t BuDownloadTotal(int servers, int k, int files);

}  // namespace wpir

#endif  // WPIR_MDSPIR_H_
